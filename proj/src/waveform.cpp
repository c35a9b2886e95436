// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/waveform.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swipt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Harmonic index of tone n when the grid is commensurate with its own tone
// spacing (lowest tone an integer multiple of delta_f). The time-domain
// helpers only operate on such grids; anything else has no common period.
int harmonic_index(const FrequencyGrid& grid, int tone) {
  const double ratio = grid.f0_hz / grid.delta_f_hz;
  const double k0 = std::round(ratio);
  if (std::abs(ratio - k0) > 1e-6)
    throw WindowError("grid is not harmonic: lowest tone must be an integer multiple of delta_f");
  return static_cast<int>(k0) + tone;
}

void check_uniform_period(std::span<const double> times, const FrequencyGrid& grid) {
  const size_t s = times.size();
  if (s < 2) throw WindowError("need at least two samples");
  const double period = 1.0 / grid.delta_f_hz;
  const double dt = period / static_cast<double>(s);
  for (size_t j = 0; j < s; ++j) {
    if (std::abs(times[j] - static_cast<double>(j) * dt) > 1e-9 * period)
      throw WindowError("samples must uniformly cover exactly one fundamental period");
  }
  const int k_max = harmonic_index(grid, grid.num_tones - 1);
  if (static_cast<int>(s) < 2 * k_max + 2)
    throw WindowError("sample count too small to resolve the highest tone");
}
}  // namespace

void WaveformDesign::validate() const {
  if (!s_p.same_shape(s_i) || !s_p.same_shape(phi_p) || !s_p.same_shape(phi_i))
    throw DimensionError("waveform design: matrices must share one shape");
  if (s_p.rows() < 1 || s_p.cols() < 1)
    throw DimensionError("waveform design: need at least one tone and one antenna");
  for (double v : s_p.data())
    if (v < 0.0) throw DomainError("power-waveform amplitudes must be nonnegative");
  for (double v : s_i.data())
    if (v < 0.0) throw DomainError("information-waveform amplitudes must be nonnegative");
  if (rho < 0.0 || rho > 1.0) throw DomainError("power-splitting ratio must lie in [0, 1]");
}

void PowerBudget::validate() const {
  if (!(p_watt > 0.0)) throw ScenarioError("budget.p_watt", "power budget must be positive");
}

WaveformDesign WaveformDesign::zeros(int num_tones, int num_antennas) {
  WaveformDesign d;
  d.s_p = Matrix(num_tones, num_antennas);
  d.s_i = Matrix(num_tones, num_antennas);
  d.phi_p = Matrix(num_tones, num_antennas);
  d.phi_i = Matrix(num_tones, num_antennas);
  return d;
}

std::pair<Matrix, Matrix> matched_phases(const FrequencyResponse& channel) {
  Matrix phi(channel.num_tones(), channel.num_antennas());
  for (int n = 0; n < channel.num_tones(); ++n)
    for (int m = 0; m < channel.num_antennas(); ++m) phi(n, m) = -channel.phase(n, m);
  return {phi, phi};
}

double average_power(const WaveformDesign& design) {
  design.validate();
  return 0.5 * (design.s_p.frobenius_sq() + design.s_i.frobenius_sq());
}

std::vector<std::vector<double>> synthesize_transmit(const WaveformDesign& design,
                                                     const SymbolDraw& symbols,
                                                     const FrequencyGrid& grid,
                                                     std::span<const double> times) {
  design.validate();
  const int n_tones = design.num_tones();
  const int n_ant = design.num_antennas();
  if (grid.num_tones != n_tones) throw DimensionError("design does not match the tone grid");
  if (static_cast<int>(symbols.values.size()) != n_tones ||
      static_cast<int>(symbols.tone_powers.size()) != n_tones)
    throw DimensionError("symbol draw does not match the tone grid");

  std::vector<std::vector<double>> out(n_ant, std::vector<double>(times.size(), 0.0));
  for (int m = 0; m < n_ant; ++m) {
    for (int n = 0; n < n_tones; ++n) {
      const double w = grid.omega(n);
      const double sp = design.s_p(n, m);
      // Per-draw information amplitude: rms amplitude scaled by |x|/sqrt(P).
      const double p_n = symbols.tone_powers[n];
      const double si =
          p_n > 0.0 ? design.s_i(n, m) * std::abs(symbols.values[n]) / std::sqrt(p_n) : 0.0;
      const double phi_i = design.phi_i(n, m) + std::arg(symbols.values[n]);
      for (size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        double v = 0.0;
        if (sp != 0.0) v += sp * std::cos(w * t + design.phi_p(n, m));
        if (si != 0.0) v += si * std::cos(w * t + phi_i);
        out[m][j] += v;
      }
    }
  }
  return out;
}

std::vector<double> sample_times(const FrequencyGrid& grid, int samples_per_period) {
  grid.validate();
  if (samples_per_period < 2) throw WindowError("need at least two samples per period");
  const double period = 1.0 / grid.delta_f_hz;
  std::vector<double> t(samples_per_period);
  for (int j = 0; j < samples_per_period; ++j)
    t[j] = period * static_cast<double>(j) / samples_per_period;
  return t;
}

std::complex<double> tone_amplitude(std::span<const double> series, std::span<const double> times,
                                    const FrequencyGrid& grid, int tone) {
  if (series.size() != times.size()) throw DimensionError("series/time size mismatch");
  check_uniform_period(times, grid);
  const int k = harmonic_index(grid, tone);
  const size_t s = series.size();
  std::complex<double> acc{0.0, 0.0};
  for (size_t j = 0; j < s; ++j) {
    const double ang = -kTwoPi * static_cast<double>(k) * static_cast<double>(j) / s;
    acc += series[j] * std::polar(1.0, ang);
  }
  return 2.0 * acc / static_cast<double>(s);
}

std::vector<double> propagate(const std::vector<std::vector<double>>& transmit,
                              std::span<const double> times, std::span<const PathTap> taps,
                              const ArrayGeometry& geometry, const FrequencyGrid& grid) {
  if (static_cast<int>(transmit.size()) != geometry.num_antennas)
    throw DimensionError("one transmit series per antenna required");
  for (const auto& x : transmit)
    if (x.size() != times.size()) throw DimensionError("series/time size mismatch");
  check_uniform_period(times, grid);

  const FrequencyResponse h = frequency_response(taps, grid, geometry);
  const int n_tones = grid.num_tones;
  std::vector<std::complex<double>> received(n_tones, {0.0, 0.0});
  for (int m = 0; m < geometry.num_antennas; ++m) {
    for (int n = 0; n < n_tones; ++n)
      received[n] += h.gain(n, m) * tone_amplitude(transmit[m], times, grid, n);
  }

  std::vector<double> y(times.size(), 0.0);
  for (int n = 0; n < n_tones; ++n) {
    const int k = harmonic_index(grid, n);
    for (size_t j = 0; j < times.size(); ++j) {
      const double ang = kTwoPi * static_cast<double>(k) * static_cast<double>(j) / times.size();
      y[j] += (received[n] * std::polar(1.0, ang)).real();
    }
  }
  return y;
}

namespace {
nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (double v : m.data()) rows.push_back(v);
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, int rows, int cols, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw ScenarioError(key, "expected a row-major array of n*m numbers");
  Matrix m(rows, cols);
  int idx = 0;
  for (const auto& v : j) {
    if (!v.is_number()) throw ScenarioError(key, "matrix entries must be numbers");
    m.data()[idx++] = v.get<double>();
  }
  return m;
}
}  // namespace

std::string format_design(const WaveformDesign& design) {
  design.validate();
  nlohmann::json j;
  j["n"] = design.num_tones();
  j["m"] = design.num_antennas();
  j["rho"] = design.rho;
  j["s_p"] = matrix_to_json(design.s_p);
  j["s_i"] = matrix_to_json(design.s_i);
  j["phi_p"] = matrix_to_json(design.phi_p);
  j["phi_i"] = matrix_to_json(design.phi_i);
  return j.dump(2) + "\n";
}

WaveformDesign parse_design(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("", std::string("design file is not valid JSON: ") + e.what());
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "m" && key != "rho" && key != "s_p" && key != "s_i" &&
        key != "phi_p" && key != "phi_i")
      throw ScenarioError(key, "unknown key in design file");
  }
  for (const char* key : {"n", "m", "rho", "s_p", "s_i", "phi_p", "phi_i"})
    if (!j.contains(key)) throw ScenarioError(key, "missing required key");
  const int n = j["n"].get<int>();
  const int m = j["m"].get<int>();
  if (n < 1 || m < 1) throw ScenarioError("n", "design dimensions must be positive");
  WaveformDesign d;
  d.rho = j["rho"].get<double>();
  d.s_p = matrix_from_json(j["s_p"], n, m, "s_p");
  d.s_i = matrix_from_json(j["s_i"], n, m, "s_i");
  d.phi_p = matrix_from_json(j["phi_p"], n, m, "phi_p");
  d.phi_i = matrix_from_json(j["phi_i"], n, m, "phi_i");
  d.validate();
  return d;
}

void save_design(const WaveformDesign& design, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open design file for writing: " + path);
  out << format_design(design);
}

WaveformDesign load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open design file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_design(buf.str());
}

}  // namespace swipt
