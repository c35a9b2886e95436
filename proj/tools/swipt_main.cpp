// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library exclusively through the C
// interface; file formats, unit conversions and plotting live here.
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svg.hpp"
#include "swiptwave/swiptwave.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMaxIterations = 3;
constexpr int kExitUsage = 64;

struct Cli {
  std::string scenario_path;
  std::string out_dir = ".";
  uint64_t seed = 1;
  double epsilon = 1e-6;
  int imax = 100;
  double rate_floor = 0.0;
  int grid = 20;
  bool wit_only = false;
  bool normalize_rate = false;
  double freeze_rho = -1.0;
  bool independent_points = false;
  std::string timestamp;  // empty = now (UTC)
  std::string design_path;
  uint64_t symbols = 10000;
};

std::string now_utc() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt * 1e3); }

json make_manifest(const Cli& cli, const std::string& verb) {
  json overrides;
  overrides["epsilon"] = cli.epsilon;
  overrides["imax"] = cli.imax;
  overrides["rate_floor"] = cli.rate_floor;
  overrides["grid"] = cli.grid;
  overrides["wit_only"] = cli.wit_only;
  overrides["normalize_rate"] = cli.normalize_rate;
  if (cli.freeze_rho >= 0.0)
    overrides["freeze_rho"] = cli.freeze_rho;
  else
    overrides["freeze_rho"] = nullptr;
  overrides["independent_points"] = cli.independent_points;

  json manifest;
  manifest["scenario"] = cli.scenario_path;
  manifest["verb"] = verb;
  manifest["overrides"] = overrides;
  manifest["seed"] = cli.seed;
  manifest["tool_version"] = swipt_version();
  manifest["timestamp"] = cli.timestamp.empty() ? now_utc() : cli.timestamp;
  return manifest;
}

swipt_options make_options(const Cli& cli) {
  swipt_options opts;
  swipt_options_init(&opts);
  opts.epsilon = cli.epsilon;
  opts.max_iterations = cli.imax;
  opts.rate_floor_bits = cli.rate_floor;
  opts.freeze_rho = cli.freeze_rho;
  opts.wit_only = cli.wit_only ? 1 : 0;
  opts.sweep_points = cli.grid;
  opts.independent_points = cli.independent_points ? 1 : 0;
  opts.seed = cli.seed;
  return opts;
}

int report_error(const char* what, swipt_status status) {
  std::cerr << "error: " << what << ": " << swipt_status_name(status) << " ("
            << swipt_last_error() << ")\n";
  switch (status) {
    case SWIPT_ERR_INFEASIBLE:
      return kExitInfeasible;
    default:
      return kExitUsage;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RFC-4180-style field quoting; numeric fields never need it but status
// strings and headers go through the same path.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

struct ScenarioHandle {
  swipt_scenario* ptr = nullptr;
  ~ScenarioHandle() { swipt_scenario_free(ptr); }
};
struct ResultHandle {
  swipt_result* ptr = nullptr;
  ~ResultHandle() { swipt_result_free(ptr); }
};
struct DesignHandle {
  swipt_design* ptr = nullptr;
  ~DesignHandle() { swipt_design_free(ptr); }
};
struct RegionHandle {
  swipt_region* ptr = nullptr;
  ~RegionHandle() { swipt_region_free(ptr); }
};
struct OracleHandle {
  swipt_oracle_report* ptr = nullptr;
  ~OracleHandle() { swipt_oracle_report_free(ptr); }
};
struct CheckHandle {
  swipt_check_table* ptr = nullptr;
  ~CheckHandle() { swipt_check_table_free(ptr); }
};

int run_optimize(const Cli& cli) {
  ScenarioHandle scenario;
  swipt_status rc = swipt_scenario_load(cli.scenario_path.c_str(), &scenario.ptr);
  if (rc != SWIPT_OK) return report_error("scenario", rc);

  const swipt_options opts = make_options(cli);
  ResultHandle result;
  rc = swipt_optimize(scenario.ptr, &opts, &result.ptr);
  if (rc == SWIPT_ERR_INFEASIBLE) {
    std::cerr << "error: infeasible: " << swipt_last_error() << "\n"
              << "maximum achievable rate: " << swipt_scenario_max_rate(scenario.ptr)
              << " bits/symbol\n";
    return kExitInfeasible;
  }
  if (rc != SWIPT_OK) return report_error("optimize", rc);

  const int n = swipt_scenario_num_tones(scenario.ptr);
  const swipt_run_status status = swipt_result_status(result.ptr);
  const int traj_len = swipt_result_trajectory(result.ptr, nullptr, 0);
  std::vector<double> trajectory(traj_len);
  swipt_result_trajectory(result.ptr, trajectory.data(), traj_len);

  json doc;
  doc["manifest"] = make_manifest(cli, "optimize");
  doc["status"] = swipt_run_status_name(status);
  doc["zdc"] = swipt_result_zdc(result.ptr);
  doc["rate_bits"] = swipt_result_rate(result.ptr);
  doc["rate_per_tone"] = swipt_result_rate(result.ptr) / n;
  doc["rho"] = swipt_result_rho(result.ptr);
  doc["iterations"] = swipt_result_iterations(result.ptr);
  doc["trajectory"] = trajectory;

  std::filesystem::create_directories(cli.out_dir);
  write_text_file(cli.out_dir + "/optimize_result.json", doc.dump(2) + "\n");

  DesignHandle design;
  rc = swipt_result_design(result.ptr, &design.ptr);
  if (rc != SWIPT_OK) return report_error("design", rc);
  rc = swipt_design_save(design.ptr, (cli.out_dir + "/design.json").c_str());
  if (rc != SWIPT_OK) return report_error("design file", rc);

  const double rate = swipt_result_rate(result.ptr);
  std::cout << "status: " << swipt_run_status_name(status) << "\n"
            << "zdc: " << swipt_result_zdc(result.ptr) << "\n"
            << "rate: " << (cli.normalize_rate ? rate / n : rate)
            << (cli.normalize_rate ? " bits/symbol/tone" : " bits/symbol") << "\n"
            << "rho: " << swipt_result_rho(result.ptr) << "\n"
            << "iterations: " << swipt_result_iterations(result.ptr) << "\n"
            << "budget: " << swipt_scenario_power_budget(scenario.ptr) << " W ("
            << watt_to_dbm(swipt_scenario_power_budget(scenario.ptr)) << " dBm)\n"
            << "wrote " << cli.out_dir << "/optimize_result.json, " << cli.out_dir
            << "/design.json\n";

  if (status == SWIPT_RUN_MAX_ITERATIONS) return kExitMaxIterations;
  if (status == SWIPT_RUN_INFEASIBLE) return kExitInfeasible;
  return kExitOk;
}

struct RegionRow {
  double rate_bits, zdc, rho;
  int iterations;
  swipt_run_status status;
};

std::vector<RegionRow> region_rows(const swipt_region* region) {
  std::vector<RegionRow> rows(swipt_region_size(region));
  for (size_t i = 0; i < rows.size(); ++i)
    swipt_region_point(region, static_cast<int>(i), &rows[i].rate_bits, &rows[i].zdc,
                       &rows[i].rho, &rows[i].iterations, &rows[i].status);
  return rows;
}

void write_region_csv(const std::string& path, const std::vector<RegionRow>& rows, int n,
                      const json& manifest) {
  std::string csv = "# manifest: " + manifest.dump() + "\n";
  csv += "rate_bits,rate_per_tone,zdc,rho,iterations,status\r\n";
  for (const auto& r : rows) {
    csv += csv_field(format_double(r.rate_bits)) + ",";
    csv += csv_field(format_double(r.rate_bits / n)) + ",";
    csv += csv_field(format_double(r.zdc)) + ",";
    csv += csv_field(format_double(r.rho)) + ",";
    csv += std::to_string(r.iterations) + ",";
    csv += csv_field(swipt_run_status_name(r.status));
    csv += "\r\n";
  }
  write_text_file(path, csv);
}

int run_sweep(const Cli& cli) {
  ScenarioHandle scenario;
  swipt_status rc = swipt_scenario_load(cli.scenario_path.c_str(), &scenario.ptr);
  if (rc != SWIPT_OK) return report_error("scenario", rc);

  const int n = swipt_scenario_num_tones(scenario.ptr);
  const json manifest = make_manifest(cli, "sweep");

  // The main boundary always carries both waveforms; --wit-only adds the
  // comparison curve on the side.
  swipt_options opts = make_options(cli);
  opts.wit_only = 0;
  RegionHandle region;
  rc = swipt_sweep(scenario.ptr, &opts, &region.ptr);
  if (rc != SWIPT_OK) return report_error("sweep", rc);
  const std::vector<RegionRow> rows = region_rows(region.ptr);

  std::filesystem::create_directories(cli.out_dir);
  write_region_csv(cli.out_dir + "/region.csv", rows, n, manifest);

  // Optional comparison boundary without the power waveform.
  std::vector<RegionRow> wit_rows;
  if (cli.wit_only) {
    swipt_options wit_opts = opts;
    wit_opts.wit_only = 1;
    RegionHandle wit_region;
    rc = swipt_sweep(scenario.ptr, &wit_opts, &wit_region.ptr);
    if (rc != SWIPT_OK) return report_error("sweep (information-only)", rc);
    wit_rows = region_rows(wit_region.ptr);
    write_region_csv(cli.out_dir + "/region_wit_only.csv", wit_rows, n, manifest);
  }

  json doc;
  doc["manifest"] = manifest;
  json points = json::array();
  for (const auto& r : rows) {
    json p;
    p["rate_bits"] = r.rate_bits;
    p["rate_per_tone"] = r.rate_bits / n;
    p["zdc"] = r.zdc;
    p["rho"] = r.rho;
    p["iterations"] = r.iterations;
    p["status"] = swipt_run_status_name(r.status);
    points.push_back(p);
  }
  doc["points"] = points;
  write_text_file(cli.out_dir + "/sweep_result.json", doc.dump(2) + "\n");

  auto to_series = [&](const std::vector<RegionRow>& src, const std::string& name,
                       const std::string& color) {
    swipt_cli::SvgSeries s;
    s.name = name;
    s.color = color;
    for (const auto& r : src) {
      if (r.status == SWIPT_RUN_INFEASIBLE) continue;
      s.x.push_back(cli.normalize_rate ? r.rate_bits / n : r.rate_bits);
      s.y.push_back(r.zdc);
    }
    return s;
  };
  std::vector<swipt_cli::SvgSeries> series{to_series(rows, "superposed waveform", "#1f77b4")};
  if (!wit_rows.empty())
    series.push_back(to_series(wit_rows, "information waveform only", "#d62728"));
  swipt_cli::write_svg_plot(
      cli.out_dir + "/region.svg", "rate-energy boundary",
      cli.normalize_rate ? "rate (bits/symbol/tone)" : "rate (bits/symbol)", "z_dc (a.u.)",
      series, "manifest: " + manifest.dump());

  int failures = 0;
  for (const auto& r : rows)
    if (r.status == SWIPT_RUN_INFEASIBLE) ++failures;
  std::cout << "swept " << rows.size() << " points (" << failures << " failed), wrote "
            << cli.out_dir << "/region.csv, region.svg, sweep_result.json\n";
  return kExitOk;
}

int run_oracle(const Cli& cli) {
  if (cli.design_path.empty()) {
    std::cerr << "error: oracle requires --design\n";
    return kExitUsage;
  }
  ScenarioHandle scenario;
  swipt_status rc = swipt_scenario_load(cli.scenario_path.c_str(), &scenario.ptr);
  if (rc != SWIPT_OK) return report_error("scenario", rc);
  DesignHandle design;
  rc = swipt_design_load(cli.design_path.c_str(), &design.ptr);
  if (rc != SWIPT_OK) return report_error("design", rc);

  OracleHandle report;
  rc = swipt_oracle(scenario.ptr, design.ptr, cli.symbols, cli.seed, &report.ptr);
  if (rc != SWIPT_OK) return report_error("oracle", rc);

  const bool ok = swipt_oracle_within_three_sigma(report.ptr) != 0;
  json doc;
  doc["manifest"] = make_manifest(cli, "oracle");
  doc["design"] = cli.design_path;
  doc["analytic_zdc"] = swipt_oracle_analytic(report.ptr);
  doc["estimate"] = swipt_oracle_estimate(report.ptr);
  doc["std_error"] = swipt_oracle_std_error(report.ptr);
  doc["num_symbols"] = cli.symbols;
  doc["seed"] = cli.seed;
  doc["carrier_multiple"] = swipt_oracle_carrier_multiple(report.ptr);
  doc["sample_rate_hz"] = swipt_oracle_sample_rate(report.ptr);
  doc["samples_per_period"] = swipt_oracle_samples_per_period(report.ptr);
  doc["within_three_sigma"] = ok;

  std::filesystem::create_directories(cli.out_dir);
  write_text_file(cli.out_dir + "/oracle_report.json", doc.dump(2) + "\n");

  std::cout << "analytic zdc: " << swipt_oracle_analytic(report.ptr) << "\n"
            << "estimate:     " << swipt_oracle_estimate(report.ptr) << " +/- "
            << swipt_oracle_std_error(report.ptr) << " (" << cli.symbols << " symbols)\n"
            << "agreement:    " << (ok ? "within" : "OUTSIDE") << " three standard errors\n"
            << "wrote " << cli.out_dir << "/oracle_report.json\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int run_validate(const Cli& cli) {
  ScenarioHandle scenario;
  swipt_status rc = swipt_scenario_load(cli.scenario_path.c_str(), &scenario.ptr);
  if (rc != SWIPT_OK) return report_error("scenario", rc);

  CheckHandle table;
  rc = swipt_validate(scenario.ptr, cli.seed, &table.ptr);
  if (rc != SWIPT_OK) return report_error("validate", rc);

  const int count = swipt_check_table_size(table.ptr);
  int failed = 0;
  std::printf("%-28s %-6s %s\n", "check", "result", "detail");
  for (int i = 0; i < count; ++i) {
    const bool ok = swipt_check_passed(table.ptr, i) != 0;
    if (!ok) ++failed;
    std::printf("%-28s %-6s %s\n", swipt_check_name(table.ptr, i), ok ? "PASS" : "FAIL",
                swipt_check_detail(table.ptr, i));
  }
  std::printf("%d/%d checks passed\n", count - failed, count);
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"joint power/information waveform designer"};
  app.require_subcommand(1);

  app.add_option("--scenario", cli.scenario_path, "scenario file (JSON)")->required();
  app.add_option("--seed", cli.seed, "master seed");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_option("--epsilon", cli.epsilon, "convergence threshold (relative)");
  app.add_option("--imax", cli.imax, "iteration cap");
  app.add_option("--rate-floor", cli.rate_floor, "rate floor in bits per symbol");
  app.add_option("--grid", cli.grid, "sweep grid size");
  app.add_flag("--wit-only", cli.wit_only,
               "optimize: drop the power waveform; sweep: also emit the comparison curve");
  app.add_flag("--normalize-rate", cli.normalize_rate, "report rate per tone");
  app.add_option("--freeze-rho", cli.freeze_rho, "fix the power-splitting ratio");
  app.add_flag("--independent-points", cli.independent_points,
               "sweep points run concurrently without warm starts");
  app.add_option("--timestamp", cli.timestamp, "pin the manifest timestamp (for reproducible runs)");

  CLI::App* optimize = app.add_subcommand("optimize", "solve one rate-floor instance");
  optimize->fallthrough();
  CLI::App* sweep = app.add_subcommand("sweep", "trace the rate-energy boundary");
  sweep->fallthrough();
  CLI::App* oracle = app.add_subcommand("oracle", "check a design against the time-domain estimate");
  oracle->fallthrough();
  oracle->add_option("--design", cli.design_path, "design file to check")->required();
  oracle->add_option("--symbols", cli.symbols, "symbol draws");
  CLI::App* validate = app.add_subcommand("validate", "run the invariant battery");
  validate->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (optimize->parsed()) return run_optimize(cli);
    if (sweep->parsed()) return run_sweep(cli);
    if (oracle->parsed()) return run_oracle(cli);
    if (validate->parsed()) return run_validate(cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
