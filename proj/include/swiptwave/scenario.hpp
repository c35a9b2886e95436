// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "swiptwave/channel.hpp"
#include "swiptwave/harvester.hpp"
#include "swiptwave/waveform.hpp"

namespace swipt {

/// Everything one optimization run needs: propagation taps, tone grid, array
/// geometry, rectifier coefficients, power budget and noise.
struct Scenario {
  std::vector<PathTap> taps;
  FrequencyGrid grid;
  ArrayGeometry geometry;
  RectennaParams rectenna;
  PowerBudget budget;
  NoiseProfile noise;

  FrequencyResponse channel() const { return frequency_response(taps, grid, geometry); }
  void validate() const;
};

/// Parses the JSON scenario format (see the README for the schema). Unknown
/// keys are rejected; // comments are allowed. Rectifier coefficients may be
/// given directly as k2/k4 or derived from a diode block.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace swipt
