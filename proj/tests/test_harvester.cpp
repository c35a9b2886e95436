// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "swiptwave/harvester.hpp"
#include "swiptwave/rng.hpp"

using namespace swipt;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Reference evaluators written exactly as the nested index sums, used as an
// independent check of the phasor-factorized implementations.
double ref_second_moment(const Matrix& s, const Matrix& psi, const Matrix& a) {
  double acc = 0.0;
  for (int n = 0; n < s.rows(); ++n)
    for (int m0 = 0; m0 < s.cols(); ++m0)
      for (int m1 = 0; m1 < s.cols(); ++m1)
        acc += s(n, m0) * s(n, m1) * a(n, m0) * a(n, m1) * std::cos(psi(n, m0) - psi(n, m1));
  return 0.5 * acc;
}

double ref_fourth_moment_p(const Matrix& s, const Matrix& psi, const Matrix& a) {
  const int n_tones = s.rows(), n_ant = s.cols();
  double acc = 0.0;
  for (int n0 = 0; n0 < n_tones; ++n0)
    for (int n1 = 0; n1 < n_tones; ++n1)
      for (int n2 = 0; n2 < n_tones; ++n2) {
        const int n3 = n0 + n1 - n2;
        if (n3 < 0 || n3 >= n_tones) continue;
        for (int m0 = 0; m0 < n_ant; ++m0)
          for (int m1 = 0; m1 < n_ant; ++m1)
            for (int m2 = 0; m2 < n_ant; ++m2)
              for (int m3 = 0; m3 < n_ant; ++m3)
                acc += s(n0, m0) * s(n1, m1) * s(n2, m2) * s(n3, m3) * a(n0, m0) * a(n1, m1) *
                       a(n2, m2) * a(n3, m3) *
                       std::cos(psi(n0, m0) + psi(n1, m1) - psi(n2, m2) - psi(n3, m3));
      }
  return 0.375 * acc;
}

double ref_fourth_moment_i(const Matrix& s, const Matrix& psi, const Matrix& a) {
  const int n_tones = s.rows(), n_ant = s.cols();
  double acc = 0.0;
  for (int n0 = 0; n0 < n_tones; ++n0)
    for (int n1 = 0; n1 < n_tones; ++n1)
      for (int m0 = 0; m0 < n_ant; ++m0)
        for (int m1 = 0; m1 < n_ant; ++m1)
          for (int m2 = 0; m2 < n_ant; ++m2)
            for (int m3 = 0; m3 < n_ant; ++m3)
              acc += s(n0, m0) * a(n0, m0) * s(n1, m1) * a(n1, m1) * s(n0, m2) * a(n0, m2) *
                     s(n1, m3) * a(n1, m3) *
                     std::cos(psi(n0, m0) + psi(n1, m1) - psi(n0, m2) - psi(n1, m3));
  return 0.75 * acc;
}

Matrix constant(int n, int m, double v) {
  Matrix out(n, m);
  for (auto& x : out.data()) x = v;
  return out;
}

Matrix random_matrix(Rng& rng, int n, int m, double lo, double hi) {
  Matrix out(n, m);
  for (auto& x : out.data()) x = rng.uniform(lo, hi);
  return out;
}
}  // namespace

TEST_CASE("diode coefficients follow the Taylor formula") {
  const DiodeParams diode{5e-6, 0.0, 1.05, 25.86e-3};
  const auto [k2, k4] = k_coefficients(diode);
  const double nvt = diode.n_ideality * diode.v_t_volt;
  CHECK(k2 == doctest::Approx(diode.i_s_amp / (2.0 * nvt * nvt)));
  CHECK(k4 == doctest::Approx(diode.i_s_amp / (24.0 * nvt * nvt * nvt * nvt)));

  SUBCASE("linear in the saturation current") {
    DiodeParams scaled = diode;
    scaled.i_s_amp *= 3.0;
    const auto [k2s, k4s] = k_coefficients(scaled);
    CHECK(k2s == doctest::Approx(3.0 * k2));
    CHECK(k4s == doctest::Approx(3.0 * k4));
  }
  SUBCASE("thermal voltage power laws") {
    DiodeParams hot = diode;
    hot.v_t_volt *= 2.0;
    const auto [k2h, k4h] = k_coefficients(hot);
    CHECK(k2h == doctest::Approx(k2 / 4.0));
    CHECK(k4h == doctest::Approx(k4 / 16.0));
  }
  SUBCASE("operating point enters exponentially") {
    DiodeParams biased = diode;
    biased.a_volt = 0.01;
    const auto [k2b, k4b] = k_coefficients(biased);
    const double factor = std::exp(biased.a_volt / nvt);
    CHECK(k2b == doctest::Approx(factor * k2));
    CHECK(k4b == doctest::Approx(factor * k4));
  }
}

TEST_CASE("single-tone moments have closed forms") {
  const Matrix a = constant(1, 1, 1.0);
  const Matrix s = constant(1, 1, std::sqrt(2.0));
  const Matrix psi = constant(1, 1, 0.77);  // any phase

  CHECK(y_p2(s, psi, a) == doctest::Approx(1.0));
  CHECK(y_p4(s, psi, a) == doctest::Approx(1.5));
  CHECK(y_i2(s, psi, a) == doctest::Approx(1.0));
  // The Gaussian fourth moment doubles the deterministic single-tone value.
  CHECK(y_i4(s, psi, a) == doctest::Approx(3.0));
  CHECK(y_i4(s, psi, a) == doctest::Approx(2.0 * y_p4(s, psi, a)));

  const Matrix zero = constant(1, 1, 0.0);
  CHECK(y_i2(zero, psi, a) == 0.0);
  CHECK(y_i4(zero, psi, a) == 0.0);
}

TEST_CASE("two equal aligned tones excite six index quadruples") {
  CHECK(dc_quadruples(2).size() == 6);
  const double s_val = 0.83;
  const Matrix a = constant(2, 1, 1.0);
  const Matrix s = constant(2, 1, s_val);
  const Matrix psi = constant(2, 1, 0.0);
  const double s4 = s_val * s_val * s_val * s_val;
  CHECK(y_p4(s, psi, a) == doctest::Approx(0.375 * 6.0 * s4));
  CHECK(y_p4(s, psi, a) == doctest::Approx(ref_fourth_moment_p(s, psi, a)));
}

TEST_CASE("moment evaluators agree with the literal index sums") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    const int m = 1 + static_cast<int>(rng.uniform() * 2);
    const Matrix s = random_matrix(rng, n, m, 0.0, 1.5);
    const Matrix psi = random_matrix(rng, n, m, -kPi, kPi);
    const Matrix a = random_matrix(rng, n, m, 0.1, 2.0);
    CHECK(y_p2(s, psi, a) == doctest::Approx(ref_second_moment(s, psi, a)).epsilon(1e-10));
    CHECK(y_p4(s, psi, a) == doctest::Approx(ref_fourth_moment_p(s, psi, a)).epsilon(1e-10));
    CHECK(y_i2(s, psi, a) == doctest::Approx(ref_second_moment(s, psi, a)).epsilon(1e-10));
    CHECK(y_i4(s, psi, a) == doctest::Approx(ref_fourth_moment_i(s, psi, a)).epsilon(1e-10));
  }
}

TEST_CASE("moment homogeneity degrees") {
  Rng rng(103);
  const Matrix s = random_matrix(rng, 3, 2, 0.1, 1.0);
  const Matrix psi = random_matrix(rng, 3, 2, -kPi, kPi);
  const Matrix a = random_matrix(rng, 3, 2, 0.2, 1.5);
  Matrix sc = s;
  const double c = 1.9;
  sc *= c;
  CHECK(y_p2(sc, psi, a) == doctest::Approx(c * c * y_p2(s, psi, a)));
  CHECK(y_i2(sc, psi, a) == doctest::Approx(c * c * y_i2(s, psi, a)));
  CHECK(y_p4(sc, psi, a) == doctest::Approx(std::pow(c, 4) * y_p4(s, psi, a)));
  CHECK(y_i4(sc, psi, a) == doctest::Approx(std::pow(c, 4) * y_i4(s, psi, a)));
}

namespace {
WaveformDesign random_full_design(Rng& rng, int n, int m, bool matched,
                                  const FrequencyResponse& channel) {
  WaveformDesign d = WaveformDesign::zeros(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      d.s_p(i, j) = rng.uniform(0.0, 1.0);
      d.s_i(i, j) = rng.uniform(0.0, 1.0);
      if (!matched) {
        d.phi_p(i, j) = rng.uniform(-kPi, kPi);
        d.phi_i(i, j) = rng.uniform(-kPi, kPi);
      }
    }
  if (matched) {
    auto [phi_p, phi_i] = matched_phases(channel);
    d.phi_p = phi_p;
    d.phi_i = phi_i;
  }
  d.rho = rng.uniform(0.05, 0.95);
  return d;
}

FrequencyResponse random_channel(Rng& rng, int n, int m) {
  std::vector<std::complex<double>> gains(static_cast<size_t>(n) * m);
  for (auto& g : gains) g = std::polar(rng.uniform(0.3, 1.7), rng.uniform(-kPi, kPi));
  return FrequencyResponse(n, m, std::move(gains));
}
}  // namespace

TEST_CASE("dc proxy structure") {
  const RectennaParams rect{0.0034, 0.3829, 50.0};
  Rng rng(107);
  const FrequencyResponse channel = random_channel(rng, 3, 2);

  SUBCASE("no harvested share means no output") {
    WaveformDesign d = random_full_design(rng, 3, 2, false, channel);
    d.rho = 0.0;
    CHECK(zdc(d, channel, rect) == 0.0);
  }
  SUBCASE("information-free design keeps only the deterministic terms") {
    WaveformDesign d = random_full_design(rng, 3, 2, false, channel);
    for (auto& v : d.s_i.data()) v = 0.0;
    Matrix psi_p(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) psi_p(i, j) = d.phi_p(i, j) + channel.phase(i, j);
    const double r = rect.r_ant_ohm;
    const double expected = rect.k2 * d.rho * r * y_p2(d.s_p, psi_p, channel.amplitudes()) +
                            rect.k4 * d.rho * d.rho * r * r *
                                y_p4(d.s_p, psi_p, channel.amplitudes());
    CHECK(zdc(d, channel, rect) == doctest::Approx(expected));
  }
  SUBCASE("matched evaluation agrees with the phase-free fast path") {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(rng.uniform() * 4);
      const int m = 1 + static_cast<int>(rng.uniform() * 2);
      const FrequencyResponse ch = random_channel(rng, n, m);
      const WaveformDesign d = random_full_design(rng, n, m, true, ch);
      CHECK(zdc(d, ch, rect) ==
            doctest::Approx(zdc_matched(d.s_p, d.s_i, d.rho, ch.amplitudes(), rect))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("phase-aligned dc proxy closed forms") {
  const RectennaParams rect{1.0, 1.0, 1.0};
  const Matrix a = constant(1, 1, 1.0);
  const Matrix zero = constant(1, 1, 0.0);
  const Matrix root2 = constant(1, 1, std::sqrt(2.0));

  // Deterministic tone only: second moment 1, fourth moment 3/2.
  CHECK(zdc_matched(root2, zero, 1.0, a, rect) == doctest::Approx(2.5));
  // Random tone only: second moment 1, Gaussian fourth moment 3.
  CHECK(zdc_matched(zero, root2, 1.0, a, rect) == doctest::Approx(4.0));

  SUBCASE("second/fourth order scaling") {
    Rng rng(109);
    const Matrix s_p = random_matrix(rng, 2, 1, 0.1, 1.0);
    const Matrix s_i = random_matrix(rng, 2, 1, 0.1, 1.0);
    const Matrix amp = random_matrix(rng, 2, 1, 0.5, 1.5);
    const double rho = 0.7;
    const double base = zdc_matched(s_p, s_i, rho, amp, rect);
    // Separate the second- and fourth-order parts via two scalings.
    const double c = 2.0;
    Matrix s_p_c = s_p, s_i_c = s_i;
    s_p_c *= c;
    s_i_c *= c;
    const double scaled = zdc_matched(s_p_c, s_i_c, rho, amp, rect);
    // scaled = c^2 * second + c^4 * fourth and base = second + fourth; the
    // second-order part is isolated by evaluating at a vanishing scale.
    const double eps = 1e-4;
    Matrix s_p_e = s_p, s_i_e = s_i;
    s_p_e *= eps;
    s_i_e *= eps;
    const double second = zdc_matched(s_p_e, s_i_e, rho, amp, rect) / (eps * eps);
    CHECK(scaled ==
          doctest::Approx(c * c * second + c * c * c * c * (base - second)).epsilon(1e-4));
  }
}

TEST_CASE("rate expressions") {
  const NoiseProfile noise = NoiseProfile::uniform(1, 1.0);
  const Matrix a = constant(1, 1, 1.0);

  Matrix s(1, 1);
  s(0, 0) = std::sqrt(3.0);  // coherent power 3 over unit noise
  CHECK(rate(s, 0.0, a, noise) == doctest::Approx(2.0));
  CHECK(rate(s, 1.0, a, noise) == 0.0);

  SUBCASE("two antennas combine coherently") {
    const NoiseProfile n1 = NoiseProfile::uniform(1, 1.0);
    const Matrix a2 = constant(1, 2, 1.0);
    Matrix s2(1, 2);
    s2(0, 0) = s2(0, 1) = 0.4;
    // Four times the single-antenna coherent power.
    const double c_single = 0.4 * 0.4;
    CHECK(rate(s2, 0.25, a2, n1) ==
          doctest::Approx(std::log2(1.0 + 0.75 * 4.0 * c_single)));
  }
  SUBCASE("aligned phases maximize the general-phase rate") {
    Rng rng(113);
    const FrequencyResponse ch = random_channel(rng, 3, 2);
    const NoiseProfile n3 = NoiseProfile::uniform(3, 0.5);
    const Matrix s_i = random_matrix(rng, 3, 2, 0.1, 1.0);
    const double aligned = rate(s_i, 0.4, ch.amplitudes(), n3);
    CHECK(rate_general(s_i, Matrix(3, 2), 0.4, ch.amplitudes(), n3) ==
          doctest::Approx(aligned));
    for (int k = 0; k < 20; ++k) {
      const Matrix psi = random_matrix(rng, 3, 2, -kPi, kPi);
      CHECK(rate_general(s_i, psi, 0.4, ch.amplitudes(), n3) <= aligned + 1e-12);
    }
  }
}

TEST_CASE("dc proxy and rate move oppositely in the splitting ratio") {
  Rng rng(127);
  const FrequencyResponse ch = random_channel(rng, 3, 1);
  const NoiseProfile noise = NoiseProfile::uniform(3, 0.3);
  const Matrix s_p = random_matrix(rng, 3, 1, 0.1, 1.0);
  const Matrix s_i = random_matrix(rng, 3, 1, 0.1, 1.0);
  const RectennaParams rect{0.0034, 0.3829, 50.0};
  double prev_z = -1.0, prev_r = 1e300;
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double z = zdc_matched(s_p, s_i, rho, ch.amplitudes(), rect);
    const double r = rate(s_i, rho, ch.amplitudes(), noise);
    CHECK(z > prev_z);
    CHECK(r < prev_r);
    prev_z = z;
    prev_r = r;
  }
}

TEST_CASE("time-domain estimator") {
  const RectennaParams rect{0.0034, 0.3829, 50.0};
  const FrequencyGrid grid{5.18e9, 62.5e3, 2};
  const ArrayGeometry geometry{1, 0.0};
  const std::vector<PathTap> taps{{0.0, 1.0, 0.0, 0.0}, {2e-6, 0.5, 0.9, 0.0}};
  const FrequencyResponse channel = frequency_response(taps, grid, geometry);
  Rng rng(131);

  SUBCASE("deterministic designs are reproduced to roundoff") {
    WaveformDesign d = random_full_design(rng, 2, 1, false, channel);
    for (auto& v : d.s_i.data()) v = 0.0;
    const double analytic = zdc(d, channel, rect);
    const MonteCarloReport mc = monte_carlo_zdc(d, taps, geometry, grid, rect, 3, 42);
    CHECK(mc.std_error == doctest::Approx(0.0));
    CHECK(std::abs(mc.estimate - analytic) <= 1e-6 * std::abs(analytic));
  }
  SUBCASE("random component converges at the statistical rate") {
    WaveformDesign d = random_full_design(rng, 2, 1, false, channel);
    for (auto& v : d.s_p.data()) v = 0.0;
    const double analytic = zdc(d, channel, rect);
    const MonteCarloReport mc = monte_carlo_zdc(d, taps, geometry, grid, rect, 10000, 7);
    CHECK(std::abs(mc.estimate - analytic) <= 3.0 * mc.std_error);
  }
  SUBCASE("cross moments vanish statistically") {
    const WaveformDesign d = random_full_design(rng, 2, 1, false, channel);
    const MonteCarloReport mc = monte_carlo_zdc(d, taps, geometry, grid, rect, 8000, 11);
    CHECK(std::abs(mc.cross_pi_mean) <= 3.0 * mc.cross_pi_se + 1e-18);
    CHECK(std::abs(mc.cross_p3i_mean) <= 3.0 * mc.cross_p3i_se + 1e-18);
    CHECK(std::abs(mc.cross_pi3_mean) <= 3.0 * mc.cross_pi3_se + 1e-18);
  }
  SUBCASE("same seed reproduces the report bit for bit") {
    const WaveformDesign d = random_full_design(rng, 2, 1, false, channel);
    const MonteCarloReport a = monte_carlo_zdc(d, taps, geometry, grid, rect, 500, 99);
    const MonteCarloReport b = monte_carlo_zdc(d, taps, geometry, grid, rect, 500, 99);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
  }
  SUBCASE("sampling configuration is validated") {
    const WaveformDesign d = random_full_design(rng, 2, 1, false, channel);
    MonteCarloOptions opts;
    opts.carrier_multiple = 2;  // below the intermodulation separation bound
    CHECK_THROWS_AS(monte_carlo_zdc(d, taps, geometry, grid, rect, 10, 1, opts), WindowError);
    opts.carrier_multiple = 0;
    opts.oversample = 2;
    CHECK_THROWS_AS(monte_carlo_zdc(d, taps, geometry, grid, rect, 10, 1, opts), WindowError);
    CHECK_THROWS_AS(monte_carlo_zdc(d, taps, geometry, grid, rect, 0, 1), WindowError);
  }
}
