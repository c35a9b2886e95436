// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "swiptwave/optimizer.hpp"
#include "swiptwave/rng.hpp"

using namespace swipt;

namespace {
const RectennaParams kRect{0.0034, 0.3829, 50.0};
const PowerBudget kBudget{1e-5};

FrequencyResponse flat(int n, int m = 1) {
  return flat_channel({5.18e9, 62.5e3, n}, {m, m > 1 ? 0.03 : 0.0});
}
}  // namespace

TEST_CASE("water-filling allocation") {
  SUBCASE("flat channel splits evenly") {
    const Matrix a(4, 1, 1.0);
    const auto wf = waterfilling(a, NoiseProfile::uniform(4, 1.0), 4.0);
    for (double p : wf.tone_powers) CHECK(p == doctest::Approx(1.0));
    CHECK(wf.max_rate_bits == doctest::Approx(4.0 * std::log2(2.0)));
    for (int n = 0; n < 4; ++n) CHECK(wf.s_i(n, 0) == doctest::Approx(1.0));
  }
  SUBCASE("a drowned tone gets nothing") {
    const Matrix a(3, 1, 1.0);
    NoiseProfile noise = NoiseProfile::uniform(3, 1.0);
    noise.sigma2_watt[1] = 1e12;
    const auto wf = waterfilling(a, noise, 2.0);
    CHECK(wf.tone_powers[1] == 0.0);
    CHECK(wf.tone_powers[0] == doctest::Approx(1.0));
    CHECK(wf.tone_powers[2] == doctest::Approx(1.0));
  }
  SUBCASE("two-tone hand instance") {
    const Matrix a(2, 1, 1.0);
    NoiseProfile noise;
    noise.sigma2_watt = {1.0, 2.0};
    const auto wf = waterfilling(a, noise, 1.0);
    CHECK(wf.tone_powers[0] == doctest::Approx(1.0));
    CHECK(wf.tone_powers[1] == doctest::Approx(0.0));
    CHECK(wf.max_rate_bits == doctest::Approx(1.0));
  }
  SUBCASE("optimality conditions hold on random instances") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform() * 6);
      Matrix a(n, 1);
      NoiseProfile noise;
      for (int i = 0; i < n; ++i) {
        a(i, 0) = rng.uniform(0.2, 2.0);
        noise.sigma2_watt.push_back(rng.uniform(0.1, 3.0));
      }
      const double total = rng.uniform(0.5, 5.0);
      const auto wf = waterfilling(a, noise, total);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += wf.tone_powers[i];
        const double threshold = noise.sigma2_watt[i] / (a(i, 0) * a(i, 0));
        if (wf.tone_powers[i] > 1e-9) {
          // Active tones fill to the common level.
          CHECK(wf.tone_powers[i] + threshold == doctest::Approx(wf.water_level).epsilon(1e-6));
        } else {
          CHECK(threshold >= wf.water_level * (1.0 - 1e-9));
        }
      }
      CHECK(sum == doctest::Approx(total));
    }
  }
}

TEST_CASE("condensed program structure") {
  const NoiseProfile noise = NoiseProfile::uniform(2, 1e-7);
  AnchorPoint anchor;
  anchor.s_p = Matrix(2, 2, 1e-3);
  anchor.s_i = Matrix(2, 2, 1e-3);

  SUBCASE("variable count is 2NM + 3") {
    const auto prob = build_condensed_gp(Matrix(2, 2, 1.0), kRect, noise, 1e-5, 1.0, anchor);
    CHECK(prob.vars.size() == 2 * 2 * 2 + 3);
    // power, condensed energy bound, condensed rate bound, splitter
    CHECK(prob.inequalities.size() == 4);
  }
  SUBCASE("zero rate floor drops the rate constraint") {
    const auto prob = build_condensed_gp(Matrix(2, 2, 1.0), kRect, noise, 1e-5, 0.0, anchor);
    CHECK(prob.inequalities.size() == 3);
  }
  SUBCASE("the single-tone proxy has exactly five distinct monomials") {
    const auto posy = zdc_posynomial(Matrix(1, 1, 1.0), kRect);
    CHECK(posy.size() == 5);
  }
  SUBCASE("anchors must be representable") {
    AnchorPoint bad = anchor;
    bad.s_p = Matrix(1, 1, 1.0);  // wrong shape
    CHECK_THROWS(build_condensed_gp(Matrix(2, 2, 1.0), kRect, noise, 1e-5, 0.0, bad));
  }
}

TEST_CASE("energy-only optimization") {
  OptimizationConfig config;
  SUBCASE("single tone takes the whole budget") {
    const auto od = wpt_only(flat(1), kRect, kBudget, config);
    CHECK(od.status == RunStatus::optimal);
    CHECK(od.design.s_p(0, 0) == doctest::Approx(std::sqrt(2.0 * kBudget.p_watt)).epsilon(1e-6));
    CHECK(od.design.rho == 1.0);
    CHECK(od.rate_bits == 0.0);
  }
  SUBCASE("two flat tones share evenly") {
    const auto od = wpt_only(flat(2), kRect, kBudget, config);
    CHECK(od.design.s_p(0, 0) == doctest::Approx(od.design.s_p(1, 0)).epsilon(1e-4));
    const auto ref = brute_force(flat(2), kRect, NoiseProfile::uniform(2, 1e-7), kBudget, 0.0,
                                 1e-2);
    REQUIRE(ref.has_value());
    CHECK(od.zdc >= ref->zdc * (1.0 - 0.025));
  }
  SUBCASE("a dead antenna gets no power") {
    std::vector<std::complex<double>> gains{{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
    const FrequencyResponse channel(2, 2, std::move(gains));
    const auto od = wpt_only(channel, kRect, kBudget, config);
    CHECK(od.design.s_p(0, 1) <= 1e-8);
    CHECK(od.design.s_p(1, 1) <= 1e-8);
    CHECK(od.design.s_p(0, 0) > 1e-4);
  }
}

TEST_CASE("joint optimization meets its contracts") {
  OptimizationConfig config;
  const FrequencyResponse channel = flat(4);
  const NoiseProfile noise = NoiseProfile::uniform(4, 1e-7);

  SUBCASE("zero floor collapses to the energy-only solution") {
    const auto od = algorithm1(channel, kRect, noise, kBudget, config);
    const auto ref = wpt_only(channel, kRect, kBudget, config);
    CHECK(od.design.rho >= 1.0 - 1e-6);
    CHECK(od.zdc == doctest::Approx(ref.zdc).epsilon(1e-4));
    CHECK(average_power(od.design) <= kBudget.p_watt * (1.0 + 1e-9));
  }
  SUBCASE("interior floors are met with monotone progress") {
    const double cap = waterfilling(channel.amplitudes(), noise, 2.0 * kBudget.p_watt)
                           .max_rate_bits;
    config.rate_floor_bits = 0.5 * cap;
    const auto od = algorithm1(channel, kRect, noise, kBudget, config);
    CHECK(od.status == RunStatus::optimal);
    CHECK(od.rate_bits >= config.rate_floor_bits * (1.0 - 1e-9));
    CHECK(od.iterate_rate_min >= config.rate_floor_bits * (1.0 - 1e-9));
    CHECK(od.iterate_power_max <= kBudget.p_watt * (1.0 + 1e-9));
    for (size_t i = 1; i < od.trajectory.size(); ++i)
      CHECK(od.trajectory[i] >= od.trajectory[i - 1] * (1.0 - 1e-9));
    // The audited rate with 1 - rho agrees with the solved rho-bar rate.
    CHECK(od.rate_bits_audit == doctest::Approx(od.rate_bits).epsilon(1e-6));
  }
  SUBCASE("floors above the cap are refused with the cap in the message") {
    config.rate_floor_bits = 1e9;
    CHECK_THROWS_AS(algorithm1(channel, kRect, noise, kBudget, config), InfeasibleRateError);
    try {
      algorithm1(channel, kRect, noise, kBudget, config);
    } catch (const InfeasibleRateError& e) {
      CHECK(e.max_rate_bits() > 0.0);
      CHECK(std::string(e.what()).find("maximum achievable") != std::string::npos);
    }
  }
  SUBCASE("floors at the cap return the water-filling endpoint") {
    const auto wf = waterfilling(channel.amplitudes(), noise, 2.0 * kBudget.p_watt);
    config.rate_floor_bits = wf.max_rate_bits;
    const auto od = algorithm1(channel, kRect, noise, kBudget, config);
    CHECK(od.rate_bits == doctest::Approx(wf.max_rate_bits).epsilon(1e-6));
    CHECK(od.design.rho <= 1e-9);
    CHECK(od.zdc <= 1e-12);
  }
  SUBCASE("frozen splitting ratio is honored") {
    config.rate_floor_bits = 1.0;
    config.freeze_rho = 0.5;
    const auto od = algorithm1(channel, kRect, noise, kBudget, config);
    CHECK(od.design.rho == 0.5);
    CHECK(od.rate_bits >= 1.0 - 1e-9);
  }
}

TEST_CASE("boundary sweep") {
  const FrequencyResponse channel = flat(4);
  const NoiseProfile noise = NoiseProfile::uniform(4, 1e-7);
  OptimizationConfig config;
  const double cap =
      waterfilling(channel.amplitudes(), noise, 2.0 * kBudget.p_watt).max_rate_bits;

  SUBCASE("single zero-floor grid equals the energy-only point") {
    const auto points = sweep_region(channel, kRect, noise, kBudget, {0.0}, config);
    REQUIRE(points.size() == 1);
    const auto ref = wpt_only(channel, kRect, kBudget, config);
    CHECK(points[0].zdc == doctest::Approx(ref.zdc));
    CHECK(points[0].rate_bits == 0.0);
    CHECK(points[0].rho == 1.0);
  }
  SUBCASE("cap-only grid gives the rate endpoint") {
    const auto points = sweep_region(channel, kRect, noise, kBudget, {cap}, config);
    REQUIRE(points.size() == 1);
    CHECK(points[0].rate_bits == doctest::Approx(cap).epsilon(1e-6));
    CHECK(points[0].zdc <= 1e-12);
  }
  SUBCASE("boundary is monotone and feasible") {
    const auto grid = default_rate_grid(channel, noise, kBudget, 6);
    CHECK(grid.size() == 6);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(cap));
    const auto points = sweep_region(channel, kRect, noise, kBudget, grid, config);
    REQUIRE(points.size() == 6);
    for (size_t i = 0; i < points.size(); ++i) {
      CHECK(points[i].status == RunStatus::optimal);
      if (i > 0) {
        CHECK(points[i].rate_bits >= points[i - 1].rate_bits - 1e-9);
        CHECK(points[i].zdc <= points[i - 1].zdc * (1.0 + 1e-9));
      }
    }
  }
  SUBCASE("independent mode reproduces the endpoints") {
    OptimizationConfig indep = config;
    indep.independent_points = true;
    const auto points = sweep_region(channel, kRect, noise, kBudget, {0.0, 0.5 * cap, cap}, indep);
    REQUIRE(points.size() == 3);
    CHECK(points.front().rate_bits == 0.0);
    CHECK(points.back().rate_bits == doctest::Approx(cap).epsilon(1e-6));
    for (const auto& p : points) CHECK(p.status == RunStatus::optimal);
  }
}

TEST_CASE("exhaustive reference search") {
  const NoiseProfile noise = NoiseProfile::uniform(1, 1e-7);
  SUBCASE("single-tone optimum rides the Gaussian fourth moment") {
    // With one tone the random waveform out-harvests the deterministic one
    // (its fourth moment is twice as large), so the unconstrained optimum
    // puts the full budget into the information amplitudes.
    const auto ref = brute_force(flat(1), kRect, noise, kBudget, 0.0, 1e-2);
    REQUIRE(ref.has_value());
    CHECK(ref->design.s_p(0, 0) == 0.0);
    CHECK(ref->design.s_i(0, 0) ==
          doctest::Approx(std::sqrt(2.0 * kBudget.p_watt)).epsilon(1e-9));
    CHECK(ref->design.rho == doctest::Approx(0.99));
    // Hand evaluation at rho = 0.99: second moment P, fourth moment
    // 0.75 * (2P)^2, with the default coefficients and 50 ohms.
    const double p = kBudget.p_watt;
    const double expected = 0.0034 * 0.99 * 50.0 * p +
                            0.3829 * 0.99 * 0.99 * 2500.0 * 0.75 * (2.0 * p) * (2.0 * p);
    CHECK(ref->zdc == doctest::Approx(expected).epsilon(1e-9));
    // It beats the deterministic-only solution, and the condensation loop
    // lands within the reference gap bound.
    const auto wpt = wpt_only(flat(1), kRect, kBudget, OptimizationConfig{});
    CHECK(ref->zdc > wpt.zdc);
    const auto od =
        algorithm1(flat(1), kRect, noise, kBudget, OptimizationConfig{});
    CHECK(std::abs(ref->zdc - od.zdc) / ref->zdc <= 0.02);
  }
  SUBCASE("unreachable floors yield no result") {
    const auto ref = brute_force(flat(1), kRect, noise, kBudget, 1e9, 0.05);
    CHECK_FALSE(ref.has_value());
  }
  SUBCASE("resolution is validated") {
    CHECK_THROWS_AS(brute_force(flat(1), kRect, noise, kBudget, 0.0, 0.9), DomainError);
  }
}
