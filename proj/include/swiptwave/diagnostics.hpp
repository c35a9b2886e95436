// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swiptwave/gp.hpp"
#include "swiptwave/scenario.hpp"

namespace swipt {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Closed-form reference program for the solver battery.
struct GpBatteryCase {
  std::string name;
  gp::GpProblem problem;
  std::vector<double> initial;
  double expected_objective = 0.0;
};

/// Ten instances with hand-derived optima (corner, interior, equality and
/// feasibility-phase cases).
std::vector<GpBatteryCase> gp_solver_battery();

/// Reduced-size invariant battery on the given scenario: geometric-mean
/// dominance, phase-alignment optimality, the solver battery, endpoint
/// consistency, time-domain agreement and (for two-tone single-antenna
/// scenarios) the exhaustive-search gap.
std::vector<CheckResult> run_validation(const Scenario& scenario, uint64_t seed);

}  // namespace swipt
