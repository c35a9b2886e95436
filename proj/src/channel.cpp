// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/channel.hpp"

#include <cmath>

namespace swipt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSpeedOfLight = 299792458.0;
}  // namespace

double FrequencyGrid::omega(int n) const { return kTwoPi * tone_frequency_hz(n); }

void FrequencyGrid::validate() const {
  if (num_tones < 1) throw ScenarioError("grid.n", "need at least one tone");
  if (delta_f_hz <= 0.0) throw ScenarioError("grid.delta_f_hz", "tone spacing must be positive");
  if (f0_hz <= 0.0) throw ScenarioError("grid.f0_hz", "lowest tone frequency must be positive");
}

void ArrayGeometry::validate() const {
  if (num_antennas < 1) throw ScenarioError("array.m", "need at least one antenna");
  if (num_antennas > 1 && element_spacing_m <= 0.0)
    throw ScenarioError("array.spacing_m", "spacing must be positive for multi-antenna arrays");
}

FrequencyResponse::FrequencyResponse(int num_tones, int num_antennas,
                                     std::vector<std::complex<double>> gains)
    : num_tones_(num_tones), num_antennas_(num_antennas), gains_(std::move(gains)) {
  if (gains_.size() != static_cast<size_t>(num_tones) * num_antennas)
    throw DimensionError("frequency response: gain count does not match tones x antennas");
  amplitudes_ = Matrix(num_tones_, num_antennas_);
  phases_ = Matrix(num_tones_, num_antennas_);
  for (int n = 0; n < num_tones_; ++n) {
    for (int m = 0; m < num_antennas_; ++m) {
      const std::complex<double> h = gain(n, m);
      amplitudes_(n, m) = std::abs(h);
      phases_(n, m) = std::arg(h);
    }
  }
}

double FrequencyResponse::tone_gain_sq(int n) const {
  double s = 0.0;
  for (int m = 0; m < num_antennas_; ++m) s += amplitudes_(n, m) * amplitudes_(n, m);
  return s;
}

FrequencyResponse frequency_response(std::span<const PathTap> taps, const FrequencyGrid& grid,
                                     const ArrayGeometry& geometry) {
  if (taps.empty()) throw ScenarioError("taps", "need at least one path tap");
  grid.validate();
  geometry.validate();
  for (const PathTap& tap : taps) {
    if (tap.amplitude < 0.0) throw ScenarioError("taps.amplitude", "tap gains must be nonnegative");
    if (tap.delay_s < 0.0) throw ScenarioError("taps.delay_s", "tap delays must be nonnegative");
  }

  const int n_tones = grid.num_tones;
  const int n_ant = geometry.num_antennas;
  std::vector<std::complex<double>> gains(static_cast<size_t>(n_tones) * n_ant);
  for (int n = 0; n < n_tones; ++n) {
    const double w_n = grid.omega(n);
    const double lambda_n = kSpeedOfLight / grid.tone_frequency_hz(n);
    for (int m = 0; m < n_ant; ++m) {
      std::complex<double> h{0.0, 0.0};
      for (const PathTap& tap : taps) {
        // Array phase offset of element m relative to element 1.
        const double array_shift =
            kTwoPi * m * (geometry.element_spacing_m / lambda_n) * std::cos(tap.departure_angle_rad);
        const double arg = -w_n * tap.delay_s + array_shift + tap.phase_rad;
        h += tap.amplitude * std::polar(1.0, arg);
      }
      gains[static_cast<size_t>(n) * n_ant + m] = h;
    }
  }
  return FrequencyResponse(n_tones, n_ant, std::move(gains));
}

FrequencyResponse flat_channel(const FrequencyGrid& grid, const ArrayGeometry& geometry) {
  grid.validate();
  geometry.validate();
  std::vector<std::complex<double>> gains(
      static_cast<size_t>(grid.num_tones) * geometry.num_antennas, {1.0, 0.0});
  return FrequencyResponse(grid.num_tones, geometry.num_antennas, std::move(gains));
}

}  // namespace swipt
