// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "swiptwave/errors.hpp"
#include "swiptwave/matrix.hpp"

namespace swipt {

/// One multipath component: delay, gain, phase and direction of departure
/// relative to the transmit array axis.
struct PathTap {
  double delay_s = 0.0;
  double amplitude = 1.0;
  double phase_rad = 0.0;
  double departure_angle_rad = 0.0;
};

/// Uniformly spaced tone grid. Tone n sits at f0 + n * delta_f; f0 is the
/// lowest tone, not the band center.
struct FrequencyGrid {
  double f0_hz = 0.0;
  double delta_f_hz = 0.0;
  int num_tones = 0;

  double tone_frequency_hz(int n) const { return f0_hz + n * delta_f_hz; }
  double omega(int n) const;
  void validate() const;
};

/// Uniform linear transmit array. The first element is the phase reference;
/// spacing is ignored for single-antenna setups.
struct ArrayGeometry {
  int num_antennas = 1;
  double element_spacing_m = 0.0;

  void validate() const;
};

/// Per-tone, per-antenna complex gains with cached amplitude/phase split.
class FrequencyResponse {
 public:
  FrequencyResponse() = default;
  FrequencyResponse(int num_tones, int num_antennas,
                    std::vector<std::complex<double>> gains);

  int num_tones() const { return num_tones_; }
  int num_antennas() const { return num_antennas_; }

  std::complex<double> gain(int n, int m) const {
    return gains_[static_cast<size_t>(n) * num_antennas_ + m];
  }
  double amplitude(int n, int m) const { return amplitudes_(n, m); }
  double phase(int n, int m) const { return phases_(n, m); }

  const Matrix& amplitudes() const { return amplitudes_; }
  const Matrix& phases() const { return phases_; }

  /// Squared Euclidean norm of the tone-n gain row.
  double tone_gain_sq(int n) const;

 private:
  int num_tones_ = 0;
  int num_antennas_ = 0;
  std::vector<std::complex<double>> gains_;
  Matrix amplitudes_;
  Matrix phases_;
};

/// Frequency response of the tapped multipath channel on the given grid,
/// one column per transmit antenna. Uses the exact per-tone wavelength for
/// the array phase offsets.
FrequencyResponse frequency_response(std::span<const PathTap> taps, const FrequencyGrid& grid,
                                     const ArrayGeometry& geometry);

/// All-ones response (unit impulse channel), any grid/array.
FrequencyResponse flat_channel(const FrequencyGrid& grid, const ArrayGeometry& geometry);

}  // namespace swipt
