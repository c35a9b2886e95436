// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/harvester.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "swiptwave/errors.hpp"
#include "swiptwave/rng.hpp"

namespace swipt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Per-tone complex aggregate sum_m s(n,m) a(n,m) e^{j psi(n,m)}. The moment
// sums below factor over antennas through these phasors.
std::vector<std::complex<double>> tone_phasors(const Matrix& s, const Matrix& psi,
                                               const Matrix& a) {
  require_same_shape(s, psi, "harvester moments");
  require_same_shape(s, a, "harvester moments");
  std::vector<std::complex<double>> v(s.rows());
  for (int n = 0; n < s.rows(); ++n) {
    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m < s.cols(); ++m) acc += s(n, m) * a(n, m) * std::polar(1.0, psi(n, m));
    v[n] = acc;
  }
  return v;
}
}  // namespace

void RectennaParams::validate() const {
  if (k2 <= 0.0) throw ScenarioError("rectenna.k2", "second-order coefficient must be positive");
  if (k4 <= 0.0) throw ScenarioError("rectenna.k4", "fourth-order coefficient must be positive");
  if (r_ant_ohm <= 0.0)
    throw ScenarioError("rectenna.r_ant_ohm", "antenna impedance must be positive");
}

NoiseProfile NoiseProfile::uniform(int num_tones, double sigma2) {
  NoiseProfile p;
  p.sigma2_watt.assign(num_tones, sigma2);
  return p;
}

void NoiseProfile::validate(int num_tones) const {
  if (static_cast<int>(sigma2_watt.size()) != num_tones)
    throw DimensionError("noise profile does not match the tone grid");
  for (double v : sigma2_watt)
    if (v <= 0.0) throw ScenarioError("noise.sigma2_watt", "noise powers must be positive");
}

std::pair<double, double> k_coefficients(const DiodeParams& diode) {
  if (diode.i_s_amp <= 0.0) throw ScenarioError("diode.i_s_amp", "saturation current must be positive");
  if (diode.n_ideality <= 0.0) throw ScenarioError("diode.n_ideality", "ideality must be positive");
  if (diode.v_t_volt <= 0.0) throw ScenarioError("diode.v_t_volt", "thermal voltage must be positive");
  const double nvt = diode.n_ideality * diode.v_t_volt;
  const double common = diode.i_s_amp * std::exp(diode.a_volt / nvt);
  const double k2 = common / (2.0 * nvt * nvt);
  const double k4 = common / (24.0 * nvt * nvt * nvt * nvt);
  return {k2, k4};
}

const std::vector<std::array<int, 4>>& dc_quadruples(int num_tones) {
  static std::mutex mu;
  static std::map<int, std::vector<std::array<int, 4>>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(num_tones);
  if (it != cache.end()) return it->second;
  std::vector<std::array<int, 4>> quads;
  for (int n0 = 0; n0 < num_tones; ++n0)
    for (int n1 = 0; n1 < num_tones; ++n1)
      for (int n2 = 0; n2 < num_tones; ++n2) {
        const int n3 = n0 + n1 - n2;
        if (n3 >= 0 && n3 < num_tones) quads.push_back({n0, n1, n2, n3});
      }
  return cache.emplace(num_tones, std::move(quads)).first->second;
}

double y_p2(const Matrix& s_p, const Matrix& psi_p, const Matrix& a) {
  const auto v = tone_phasors(s_p, psi_p, a);
  double acc = 0.0;
  for (const auto& vn : v) acc += std::norm(vn);
  return 0.5 * acc;
}

double y_p4(const Matrix& s_p, const Matrix& psi_p, const Matrix& a) {
  const auto v = tone_phasors(s_p, psi_p, a);
  double acc = 0.0;
  for (const auto& q : dc_quadruples(s_p.rows()))
    acc += (v[q[0]] * v[q[1]] * std::conj(v[q[2]]) * std::conj(v[q[3]])).real();
  return 0.375 * acc;
}

double y_i2(const Matrix& s_i, const Matrix& psi_i, const Matrix& a) {
  return y_p2(s_i, psi_i, a);
}

double y_i4(const Matrix& s_i, const Matrix& psi_i, const Matrix& a) {
  // The symbol expectation decouples the two tone indices; what remains is
  // the square of the per-tone coherent power, doubled by the Gaussian
  // fourth moment relative to a deterministic tone.
  const auto u = tone_phasors(s_i, psi_i, a);
  double acc = 0.0;
  for (const auto& un : u) acc += std::norm(un);
  return 0.75 * acc * acc;
}

namespace {
Matrix total_phases(const Matrix& phi, const FrequencyResponse& channel) {
  Matrix psi(phi.rows(), phi.cols());
  for (int n = 0; n < phi.rows(); ++n)
    for (int m = 0; m < phi.cols(); ++m) psi(n, m) = phi(n, m) + channel.phase(n, m);
  return psi;
}
}  // namespace

double zdc(const WaveformDesign& design, const FrequencyResponse& channel,
           const RectennaParams& rect) {
  design.validate();
  rect.validate();
  if (design.num_tones() != channel.num_tones() || design.num_antennas() != channel.num_antennas())
    throw DimensionError("design does not match the channel dimensions");
  const Matrix psi_p = total_phases(design.phi_p, channel);
  const Matrix psi_i = total_phases(design.phi_i, channel);
  const Matrix& a = channel.amplitudes();
  const double rho = design.rho;
  const double r = rect.r_ant_ohm;
  const double p2 = y_p2(design.s_p, psi_p, a);
  const double p4 = y_p4(design.s_p, psi_p, a);
  const double i2 = y_i2(design.s_i, psi_i, a);
  const double i4 = y_i4(design.s_i, psi_i, a);
  return rect.k2 * rho * r * (p2 + i2) + rect.k4 * rho * rho * r * r * (p4 + i4) +
         6.0 * rect.k4 * rho * rho * r * r * p2 * i2;
}

double zdc_matched(const Matrix& s_p, const Matrix& s_i, double rho, const Matrix& a,
                   const RectennaParams& rect) {
  require_same_shape(s_p, s_i, "zdc_matched");
  require_same_shape(s_p, a, "zdc_matched");
  rect.validate();
  if (rho < 0.0 || rho > 1.0) throw DomainError("power-splitting ratio must lie in [0, 1]");

  const int n_tones = s_p.rows();
  const int n_ant = s_p.cols();
  std::vector<double> b(n_tones, 0.0);  // per-tone coherent power amplitude
  std::vector<double> c(n_tones, 0.0);  // per-tone coherent information amplitude
  for (int n = 0; n < n_tones; ++n) {
    for (int m = 0; m < n_ant; ++m) {
      b[n] += s_p(n, m) * a(n, m);
      c[n] += s_i(n, m) * a(n, m);
    }
  }

  double sum_b2 = 0.0, sum_c2 = 0.0;
  for (int n = 0; n < n_tones; ++n) {
    sum_b2 += b[n] * b[n];
    sum_c2 += c[n] * c[n];
  }
  double quad = 0.0;
  for (const auto& q : dc_quadruples(n_tones)) quad += b[q[0]] * b[q[1]] * b[q[2]] * b[q[3]];

  const double r = rect.r_ant_ohm;
  const double second = 0.5 * rect.k2 * rho * r * (sum_b2 + sum_c2);
  const double fourth = rect.k4 * rho * rho * r * r *
                        (0.375 * quad + 0.75 * sum_c2 * sum_c2 + 1.5 * sum_b2 * sum_c2);
  return second + fourth;
}

double rate(const Matrix& s_i, double rho, const Matrix& a, const NoiseProfile& noise) {
  require_same_shape(s_i, a, "rate");
  noise.validate(s_i.rows());
  if (rho < 0.0 || rho > 1.0) throw DomainError("power-splitting ratio must lie in [0, 1]");
  double bits = 0.0;
  for (int n = 0; n < s_i.rows(); ++n) {
    double coherent = 0.0;
    for (int m = 0; m < s_i.cols(); ++m) coherent += s_i(n, m) * a(n, m);
    bits += std::log2(1.0 + (1.0 - rho) * coherent * coherent / noise.sigma2_watt[n]);
  }
  return bits;
}

double rate_general(const Matrix& s_i, const Matrix& psi_i, double rho, const Matrix& a,
                    const NoiseProfile& noise) {
  require_same_shape(s_i, a, "rate");
  noise.validate(s_i.rows());
  if (rho < 0.0 || rho > 1.0) throw DomainError("power-splitting ratio must lie in [0, 1]");
  const auto u = tone_phasors(s_i, psi_i, a);
  double bits = 0.0;
  for (int n = 0; n < s_i.rows(); ++n)
    bits += std::log2(1.0 + (1.0 - rho) * std::norm(u[n]) / noise.sigma2_watt[n]);
  return bits;
}

MonteCarloReport monte_carlo_zdc(const WaveformDesign& design, std::span<const PathTap> taps,
                                 const ArrayGeometry& geometry, const FrequencyGrid& grid,
                                 const RectennaParams& rect, uint64_t num_symbols, uint64_t seed,
                                 const MonteCarloOptions& options) {
  design.validate();
  rect.validate();
  grid.validate();
  const int n_tones = grid.num_tones;
  if (design.num_tones() != n_tones || design.num_antennas() != geometry.num_antennas)
    throw DimensionError("design does not match the scenario dimensions");
  if (num_symbols < 1) throw WindowError("need at least one symbol");

  const int k_carrier = options.carrier_multiple > 0 ? options.carrier_multiple : 4 * n_tones;
  if (k_carrier < 4 * n_tones)
    throw WindowError("surrogate carrier multiple must be at least four times the tone count");
  if (options.oversample < 5)
    throw WindowError("oversampling must keep fourth-order products clear of DC");

  // The channel phases/amplitudes come from the true grid; the waveform is
  // replayed on a surrogate grid whose tones are exact harmonics, so one
  // period carries the exact DC of every moment up to fourth order.
  const FrequencyResponse channel = frequency_response(taps, grid, geometry);
  const int samples = options.oversample * (k_carrier + n_tones);

  // Received per-tone phasors. The deterministic component is fixed; the
  // information component is per-symbol x_n times a fixed phasor (unit
  // symbol power; amplitudes already carry the rms scale).
  std::vector<std::complex<double>> det(n_tones, {0.0, 0.0});
  std::vector<std::complex<double>> info(n_tones, {0.0, 0.0});
  for (int n = 0; n < n_tones; ++n) {
    for (int m = 0; m < geometry.num_antennas; ++m) {
      const std::complex<double> h = channel.gain(n, m);
      det[n] += design.s_p(n, m) * std::polar(1.0, design.phi_p(n, m)) * h;
      info[n] += design.s_i(n, m) * std::polar(1.0, design.phi_i(n, m)) * h;
    }
  }

  // e^{j w'_n t_j} on the surrogate grid, tone-major.
  std::vector<std::complex<double>> basis(static_cast<size_t>(n_tones) * samples);
  for (int n = 0; n < n_tones; ++n) {
    const int harmonic = k_carrier + n;
    for (int j = 0; j < samples; ++j)
      basis[static_cast<size_t>(n) * samples + j] =
          std::polar(1.0, kTwoPi * harmonic * static_cast<double>(j) / samples);
  }

  std::vector<double> y_det(samples, 0.0);
  for (int n = 0; n < n_tones; ++n)
    for (int j = 0; j < samples; ++j)
      y_det[j] += (det[n] * basis[static_cast<size_t>(n) * samples + j]).real();

  const double rho = design.rho;
  const double r = rect.r_ant_ohm;
  const double w2 = rect.k2 * rho * r;
  const double w4 = rect.k4 * rho * rho * r * r;

  double sum_z = 0.0, sum_z2 = 0.0;
  double sum_pi = 0.0, sum_pi2 = 0.0;
  double sum_p3i = 0.0, sum_p3i2 = 0.0;
  double sum_pi3 = 0.0, sum_pi32 = 0.0;

  std::vector<std::complex<double>> sym(n_tones);
  std::vector<double> y_inf(samples);
  for (uint64_t s = 0; s < num_symbols; ++s) {
    Rng rng(Rng::derive(seed, s));
    for (int n = 0; n < n_tones; ++n)
      sym[n] = std::complex<double>(rng.normal(), rng.normal()) * 0.7071067811865475244;

    for (int j = 0; j < samples; ++j) y_inf[j] = 0.0;
    for (int n = 0; n < n_tones; ++n) {
      const std::complex<double> cn = info[n] * sym[n];
      if (cn == std::complex<double>{0.0, 0.0}) continue;
      const std::complex<double>* row = &basis[static_cast<size_t>(n) * samples];
      for (int j = 0; j < samples; ++j) y_inf[j] += (cn * row[j]).real();
    }

    double m2 = 0.0, m4 = 0.0, pi = 0.0, p3i = 0.0, pi3 = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double yp = y_det[j];
      const double yi = y_inf[j];
      const double y = yp + yi;
      const double y2 = y * y;
      m2 += y2;
      m4 += y2 * y2;
      pi += yp * yi;
      p3i += yp * yp * yp * yi;
      pi3 += yp * yi * yi * yi;
    }
    const double inv = 1.0 / samples;
    const double z = w2 * m2 * inv + w4 * m4 * inv;
    sum_z += z;
    sum_z2 += z * z;
    pi *= inv;
    p3i *= inv;
    pi3 *= inv;
    sum_pi += pi;
    sum_pi2 += pi * pi;
    sum_p3i += p3i;
    sum_p3i2 += p3i * p3i;
    sum_pi3 += pi3;
    sum_pi32 += pi3 * pi3;
  }

  const double count = static_cast<double>(num_symbols);
  auto finish = [count](double sum, double sum_sq, double& mean, double& se) {
    mean = sum / count;
    const double var = count > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0)) : 0.0;
    se = std::sqrt(var / count);
  };

  MonteCarloReport report;
  report.num_symbols = num_symbols;
  report.seed = seed;
  report.carrier_multiple = k_carrier;
  report.samples_per_period = samples;
  report.sample_rate_hz = static_cast<double>(samples) * grid.delta_f_hz;
  finish(sum_z, sum_z2, report.estimate, report.std_error);
  finish(sum_pi, sum_pi2, report.cross_pi_mean, report.cross_pi_se);
  finish(sum_p3i, sum_p3i2, report.cross_p3i_mean, report.cross_p3i_se);
  finish(sum_pi3, sum_pi32, report.cross_pi3_mean, report.cross_pi3_se);
  return report;
}

}  // namespace swipt
