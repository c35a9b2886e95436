// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "swiptwave/channel.hpp"
#include "swiptwave/matrix.hpp"

namespace swipt {

/// Superposed transmit design: deterministic power-waveform amplitudes/phases
/// (s_p, phi_p), expected information-waveform amplitudes/phases (s_i, phi_i),
/// and the receive power-splitting ratio rho. Information amplitudes are the
/// per-tone rms values; the symbol-by-symbol amplitudes scale them by |x|.
struct WaveformDesign {
  Matrix s_p;
  Matrix s_i;
  Matrix phi_p;
  Matrix phi_i;
  double rho = 0.0;

  int num_tones() const { return s_p.rows(); }
  int num_antennas() const { return s_p.cols(); }
  void validate() const;

  static WaveformDesign zeros(int num_tones, int num_antennas);
};

struct PowerBudget {
  double p_watt = 0.0;
  void validate() const;
};

/// One draw of the information symbols: complex values plus the per-tone
/// mean-square powers they were drawn with.
struct SymbolDraw {
  std::vector<std::complex<double>> values;
  std::vector<double> tone_powers;
};

/// Transmit phases that align every received tone across antennas and both
/// waveform components: the negated channel phases. Returned as
/// (power-waveform phases, information-waveform phases); the two are equal.
std::pair<Matrix, Matrix> matched_phases(const FrequencyResponse& channel);

/// Average transmit power of the design, (|S_P|_F^2 + |S_I|_F^2) / 2.
double average_power(const WaveformDesign& design);

/// Transmit signal per antenna at the given sample times: sum of the
/// deterministic tones and the drawn information tones.
std::vector<std::vector<double>> synthesize_transmit(const WaveformDesign& design,
                                                     const SymbolDraw& symbols,
                                                     const FrequencyGrid& grid,
                                                     std::span<const double> times);

/// Received signal after multipath propagation and array combining. The
/// series must hold one full fundamental period on a uniform grid (the
/// contract synthesize_transmit users follow); tone content is recovered by
/// projection, scaled by the per-tone channel gain and resynthesized, which
/// applies delays and tone-dependent array shifts exactly for periodic
/// multisines.
std::vector<double> propagate(const std::vector<std::vector<double>>& transmit,
                              std::span<const double> times, std::span<const PathTap> taps,
                              const ArrayGeometry& geometry, const FrequencyGrid& grid);

/// Uniform sample times covering exactly one fundamental period 1/delta_f
/// with `samples_per_period` points.
std::vector<double> sample_times(const FrequencyGrid& grid, int samples_per_period);

/// Complex amplitude of the cosine at tone n in a periodic series
/// (amplitude a and phase p of a*cos(w_n t + p) as a*e^{jp}).
std::complex<double> tone_amplitude(std::span<const double> series, std::span<const double> times,
                                    const FrequencyGrid& grid, int tone);

/// Design file round trip (explicit tone/antenna header, row-major
/// matrices); used by the CLI for reproducible runs.
void save_design(const WaveformDesign& design, const std::string& path);
WaveformDesign load_design(const std::string& path);
WaveformDesign parse_design(const std::string& text);
std::string format_design(const WaveformDesign& design);

}  // namespace swipt
