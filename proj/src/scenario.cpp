// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace swipt {

namespace {
using nlohmann::json;

const json& get_object(const json& parent, const char* key) {
  if (!parent.contains(key)) throw ScenarioError(key, "missing required section");
  const json& j = parent.at(key);
  if (!j.is_object()) throw ScenarioError(key, "expected an object");
  return j;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ScenarioError(prefix + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.contains(key)) throw ScenarioError(prefix + key, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError(prefix + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& prefix, const char* key,
                     double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError(prefix + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.contains(key)) throw ScenarioError(prefix + key, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ScenarioError(prefix + key, "expected an integer");
  return v.get<int>();
}
}  // namespace

void Scenario::validate() const {
  grid.validate();
  geometry.validate();
  rectenna.validate();
  budget.validate();
  noise.validate(grid.num_tones);
  if (taps.empty()) throw ScenarioError("taps", "need at least one path tap");
  for (const PathTap& tap : taps) {
    if (tap.amplitude < 0.0) throw ScenarioError("taps.amplitude", "tap gains must be nonnegative");
    if (tap.delay_s < 0.0) throw ScenarioError("taps.delay_s", "tap delays must be nonnegative");
  }
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  reject_unknown(root, "", {"grid", "array", "taps", "rectenna", "budget", "noise"});

  Scenario sc;

  const json& grid = get_object(root, "grid");
  reject_unknown(grid, "grid.", {"f0_hz", "delta_f_hz", "n"});
  sc.grid.f0_hz = get_number(grid, "grid.", "f0_hz");
  sc.grid.delta_f_hz = get_number(grid, "grid.", "delta_f_hz");
  sc.grid.num_tones = get_int(grid, "grid.", "n");

  if (root.contains("array")) {
    const json& arr = get_object(root, "array");
    reject_unknown(arr, "array.", {"m", "spacing_m"});
    sc.geometry.num_antennas = get_int(arr, "array.", "m");
    sc.geometry.element_spacing_m = get_number_or(arr, "array.", "spacing_m", 0.0);
  }

  if (!root.contains("taps")) throw ScenarioError("taps", "missing required section");
  const json& taps = root.at("taps");
  if (!taps.is_array() || taps.empty())
    throw ScenarioError("taps", "expected a non-empty array of taps");
  for (const json& t : taps) {
    if (!t.is_object()) throw ScenarioError("taps", "each tap must be an object");
    reject_unknown(t, "taps.", {"delay_s", "amplitude", "phase_rad", "angle_rad"});
    PathTap tap;
    tap.amplitude = get_number(t, "taps.", "amplitude");
    tap.delay_s = get_number_or(t, "taps.", "delay_s", 0.0);
    tap.phase_rad = get_number_or(t, "taps.", "phase_rad", 0.0);
    tap.departure_angle_rad = get_number_or(t, "taps.", "angle_rad", 0.0);
    sc.taps.push_back(tap);
  }

  const json& rect = get_object(root, "rectenna");
  reject_unknown(rect, "rectenna.",
                 {"k2", "k4", "r_ant_ohm", "diode"});
  sc.rectenna.r_ant_ohm = get_number_or(rect, "rectenna.", "r_ant_ohm", 50.0);
  if (rect.contains("diode") && !rect.contains("k2") && !rect.contains("k4")) {
    const json& diode = get_object(rect, "diode");
    reject_unknown(diode, "rectenna.diode.", {"i_s_amp", "a_volt", "n_ideality", "v_t_volt"});
    DiodeParams dp;
    dp.i_s_amp = get_number(diode, "rectenna.diode.", "i_s_amp");
    dp.a_volt = get_number_or(diode, "rectenna.diode.", "a_volt", 0.0);
    dp.n_ideality = get_number(diode, "rectenna.diode.", "n_ideality");
    dp.v_t_volt = get_number(diode, "rectenna.diode.", "v_t_volt");
    std::tie(sc.rectenna.k2, sc.rectenna.k4) = k_coefficients(dp);
  } else {
    sc.rectenna.k2 = get_number(rect, "rectenna.", "k2");
    sc.rectenna.k4 = get_number(rect, "rectenna.", "k4");
    if (rect.contains("diode"))
      throw ScenarioError("rectenna.diode", "give either k2/k4 or a diode block, not both");
  }

  const json& budget = get_object(root, "budget");
  reject_unknown(budget, "budget.", {"p_watt"});
  sc.budget.p_watt = get_number(budget, "budget.", "p_watt");

  const json& noise = get_object(root, "noise");
  reject_unknown(noise, "noise.", {"sigma2_watt"});
  if (!noise.contains("sigma2_watt"))
    throw ScenarioError("noise.sigma2_watt", "missing required field");
  const json& sigma = noise.at("sigma2_watt");
  if (sigma.is_number()) {
    sc.noise = NoiseProfile::uniform(sc.grid.num_tones, sigma.get<double>());
  } else if (sigma.is_array()) {
    if (static_cast<int>(sigma.size()) != sc.grid.num_tones)
      throw ScenarioError("noise.sigma2_watt", "per-tone noise must list one power per tone");
    for (const json& v : sigma) {
      if (!v.is_number()) throw ScenarioError("noise.sigma2_watt", "expected numbers");
      sc.noise.sigma2_watt.push_back(v.get<double>());
    }
  } else {
    throw ScenarioError("noise.sigma2_watt", "expected a number or an array");
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace swipt
