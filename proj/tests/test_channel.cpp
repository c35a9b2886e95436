// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "swiptwave/channel.hpp"
#include "swiptwave/rng.hpp"

using namespace swipt;

namespace {
const FrequencyGrid kGrid{2.4e9, 100e3, 8};
const ArrayGeometry kSingle{1, 0.0};

std::vector<PathTap> random_taps(Rng& rng, int count) {
  std::vector<PathTap> taps;
  for (int i = 0; i < count; ++i)
    taps.push_back({rng.uniform(0.0, 2e-6), rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0),
                    rng.uniform(0.0, 3.141)});
  return taps;
}
}  // namespace

TEST_CASE("single unit tap gives the identity channel") {
  const std::vector<PathTap> taps{{0.0, 1.0, 0.0, 0.0}};
  const FrequencyResponse h = frequency_response(taps, kGrid, kSingle);
  for (int n = 0; n < kGrid.num_tones; ++n) {
    CHECK(h.amplitude(n, 0) == doctest::Approx(1.0));
    CHECK(h.phase(n, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("half-period echo cancels one tone") {
  // Wideband grid so neighboring tones see a clearly different echo phase.
  const FrequencyGrid grid{10e6, 5e6, 8};
  const int tone = 3;
  const double tau = 0.5 / grid.tone_frequency_hz(tone);
  const std::vector<PathTap> taps{{0.0, 1.0, 0.0, 0.0}, {tau, 1.0, 0.0, 0.0}};
  const FrequencyResponse h = frequency_response(taps, grid, kSingle);
  CHECK(h.amplitude(tone, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(h.amplitude(0, 0) > 0.1);  // other tones keep energy
}

TEST_CASE("broadside departure leaves array columns equal") {
  const ArrayGeometry two{2, 0.06};
  const std::vector<PathTap> taps{{3e-7, 0.8, 0.4, 3.14159265358979 / 2.0}};
  const FrequencyResponse h = frequency_response(taps, kGrid, two);
  for (int n = 0; n < kGrid.num_tones; ++n) {
    CHECK(h.gain(n, 1).real() == doctest::Approx(h.gain(n, 0).real()));
    CHECK(h.gain(n, 1).imag() == doctest::Approx(h.gain(n, 0).imag()));
  }
}

TEST_CASE("off-broadside array phases differ across tones") {
  // The per-tone wavelength makes the element offset tone dependent.
  const ArrayGeometry two{2, 0.06};
  const FrequencyGrid wide{2.4e9, 50e6, 4};
  const std::vector<PathTap> taps{{0.0, 1.0, 0.0, 3.14159 / 3.0}};
  const FrequencyResponse h = frequency_response(taps, wide, two);
  const double shift0 = h.phase(0, 1) - h.phase(0, 0);
  const double shift3 = h.phase(3, 1) - h.phase(3, 0);
  CHECK(std::abs(shift0 - shift3) > 1e-4);
  // First antenna is the phase reference regardless of the angle.
  CHECK(h.phase(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("flat channel is all ones for any shape") {
  const FrequencyResponse h16 = flat_channel({5.18e9, 62.5e3, 16}, kSingle);
  CHECK(h16.num_tones() == 16);
  CHECK(h16.num_antennas() == 1);
  for (int n = 0; n < 16; ++n) CHECK(h16.gain(n, 0) == std::complex<double>{1.0, 0.0});

  const FrequencyResponse h1 = flat_channel({1e9, 1e6, 1}, kSingle);
  CHECK(h1.gain(0, 0) == std::complex<double>{1.0, 0.0});

  const FrequencyResponse h22 = flat_channel({1e9, 1e6, 2}, {2, 0.1});
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) CHECK(h22.gain(n, m) == std::complex<double>{1.0, 0.0});
}

TEST_CASE("amplitude/phase split reconstructs the gains") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto taps = random_taps(rng, 3);
    const FrequencyResponse h = frequency_response(taps, kGrid, {2, 0.05});
    for (int n = 0; n < kGrid.num_tones; ++n)
      for (int m = 0; m < 2; ++m) {
        const std::complex<double> rebuilt = h.amplitude(n, m) * std::polar(1.0, h.phase(n, m));
        CHECK(std::abs(rebuilt - h.gain(n, m)) <= 1e-14 * (1.0 + std::abs(h.gain(n, m))));
      }
  }
}

TEST_CASE("scaling every tap scales amplitudes and keeps phases") {
  Rng rng(11);
  auto taps = random_taps(rng, 4);
  const FrequencyResponse base = frequency_response(taps, kGrid, kSingle);
  const double c = 3.7;
  for (auto& tap : taps) tap.amplitude *= c;
  const FrequencyResponse scaled = frequency_response(taps, kGrid, kSingle);
  for (int n = 0; n < kGrid.num_tones; ++n) {
    CHECK(scaled.amplitude(n, 0) == doctest::Approx(c * base.amplitude(n, 0)));
    if (base.amplitude(n, 0) > 1e-12)
      CHECK(scaled.phase(n, 0) == doctest::Approx(base.phase(n, 0)));
  }
}

TEST_CASE("single-antenna response ignores departure angles") {
  Rng rng(13);
  auto taps = random_taps(rng, 3);
  const FrequencyResponse a = frequency_response(taps, kGrid, kSingle);
  for (auto& tap : taps) tap.departure_angle_rad += 1.1;
  const FrequencyResponse b = frequency_response(taps, kGrid, kSingle);
  for (int n = 0; n < kGrid.num_tones; ++n)
    CHECK(std::abs(a.gain(n, 0) - b.gain(n, 0)) <= 1e-14);
}

TEST_CASE("invalid channel inputs are rejected") {
  CHECK_THROWS_AS(frequency_response({}, kGrid, kSingle), ScenarioError);
  CHECK_THROWS_AS(flat_channel({1e9, 1e6, 0}, kSingle), ScenarioError);
  CHECK_THROWS_AS(flat_channel({1e9, -1.0, 4}, kSingle), ScenarioError);
  CHECK_THROWS_AS(flat_channel({1e9, 1e6, 4}, {2, 0.0}), ScenarioError);
  const std::vector<PathTap> bad{{0.0, -1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(frequency_response(bad, kGrid, kSingle), ScenarioError);
}
