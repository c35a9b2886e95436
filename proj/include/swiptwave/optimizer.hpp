// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "swiptwave/channel.hpp"
#include "swiptwave/gp.hpp"
#include "swiptwave/harvester.hpp"
#include "swiptwave/waveform.hpp"

namespace swipt {

struct OptimizationConfig {
  double epsilon = 1e-6;            // relative convergence threshold on the DC proxy
  int max_iterations = 100;
  double rate_floor_bits = 0.0;
  std::optional<double> freeze_rho; // fix the splitting ratio instead of optimizing it
  bool wit_only = false;            // drop the deterministic power waveform
  bool independent_points = false;  // sweep: no warm starting, points run concurrently
  gp::GpSolverOptions solver;

  void validate() const;
};

enum class RunStatus { optimal, max_iterations, infeasible };
const char* to_string(RunStatus status);

struct OptimizedDesign {
  WaveformDesign design;
  double zdc = 0.0;
  double rate_bits = 0.0;       // evaluated with the solved rho-bar variable
  double rate_bits_audit = 0.0; // re-evaluated with 1 - rho
  double rho_bar = 0.0;
  int iterations = 0;
  std::vector<double> trajectory;  // DC proxy after each solve
  // Feasibility audit across all accepted iterates.
  double iterate_power_max = 0.0;  // largest average transmit power seen
  double iterate_rate_min = 0.0;   // smallest achieved rate seen (with a floor set)
  RunStatus status = RunStatus::infeasible;
};

struct RateEnergyPoint {
  double rate_bits = 0.0;
  double zdc = 0.0;
  double rho = 0.0;
  int iterations = 0;
  RunStatus status = RunStatus::infeasible;
};

struct WaterfillingResult {
  Matrix s_i;                       // matched-filter amplitudes per tone/antenna
  std::vector<double> tone_powers;  // symbol power per tone, sums to the argument
  double max_rate_bits = 0.0;       // rate with all received power to the decoder
  double water_level = 0.0;
};

/// Classic water-filling over tones: per-tone symbol powers
/// max(0, mu - sigma^2/|h_n|^2) with mu set so they sum to `total_symbol_power`.
/// Callers working against the average-power budget P pass 2P, the symbol
/// power a full-budget passband waveform carries.
WaterfillingResult waterfilling(const Matrix& amplitudes, const NoiseProfile& noise,
                                double total_symbol_power);

/// Snapshot of the iterate the condensation is anchored at.
struct AnchorPoint {
  Matrix s_p;
  Matrix s_i;
  double rho = 0.5;
  double rho_bar = 0.5;
};

/// Emits the condensed standard-form program at the anchor: power and
/// splitter posynomials kept exact, the DC-proxy and per-tone rate
/// posynomials replaced by their geometric-mean bounds with anchor weights.
/// Variable order is s_p row-major, s_i row-major, rho, rho_bar, then the
/// epigraph variable; the rate constraint is omitted when the floor is zero.
gp::GpProblem build_condensed_gp(const Matrix& amplitudes, const RectennaParams& rect,
                                 const NoiseProfile& noise, double power_budget_watt,
                                 double rate_floor_bits, const AnchorPoint& anchor);

/// The exact (uncondensed) DC-proxy posynomial with like terms merged, in
/// the documented variable order. Exposed for structure checks and problem
/// dumps.
gp::Posynomial zdc_posynomial(const Matrix& amplitudes, const RectennaParams& rect);

/// Successive-condensation maximization of the DC proxy under the power
/// budget and rate floor. Phases stay matched to the channel throughout;
/// amplitudes and the splitting ratio iterate through condensed programs
/// until the proxy stalls or the iteration cap is hit.
OptimizedDesign algorithm1(const FrequencyResponse& channel, const RectennaParams& rect,
                           const NoiseProfile& noise, const PowerBudget& budget,
                           const OptimizationConfig& config,
                           const std::optional<AnchorPoint>& warm_start = std::nullopt);

/// Energy-only extreme point: no information waveform, splitter fully on
/// the harvester.
OptimizedDesign wpt_only(const FrequencyResponse& channel, const RectennaParams& rect,
                         const PowerBudget& budget, const OptimizationConfig& config);

/// Boundary of the rate-energy region over the given rate floors. Grid
/// values at zero and at the water-filling maximum produce the two extreme
/// points; interior points run the condensation loop, warm-started from the
/// neighboring higher-rate solution unless independent_points is set.
/// Per-point failures are recorded in the point status, not thrown.
std::vector<RateEnergyPoint> sweep_region(const FrequencyResponse& channel,
                                          const RectennaParams& rect, const NoiseProfile& noise,
                                          const PowerBudget& budget,
                                          const std::vector<double>& rate_grid_bits,
                                          const OptimizationConfig& config);

/// Uniform rate grid from zero to the water-filling maximum.
std::vector<double> default_rate_grid(const FrequencyResponse& channel, const NoiseProfile& noise,
                                      const PowerBudget& budget, int num_points);

struct BruteForceResult {
  WaveformDesign design;
  double zdc = 0.0;
  double rate_bits = 0.0;
};

/// Exhaustive reference search: squared amplitudes on a simplex grid of the
/// given resolution, splitting ratio on the same-resolution interior grid.
/// Returns nothing when no grid point meets the rate floor. Intended for
/// tiny instances; cost grows as resolution^-(2NM).
std::optional<BruteForceResult> brute_force(const FrequencyResponse& channel,
                                            const RectennaParams& rect, const NoiseProfile& noise,
                                            const PowerBudget& budget, double rate_floor_bits,
                                            double grid_resolution);

}  // namespace swipt
