// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library surface the way an external consumer would:
// only swiptwave.h, opaque handles and status codes.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "swiptwave/swiptwave.h"

namespace {
const std::string kScenarioPath = std::string(SWIPT_SCENARIO_DIR) + "/fig_flat_n16.json";

const char* kTinyScenario = R"({
  "grid": { "f0_hz": 5179968750.0, "delta_f_hz": 62500.0, "n": 2 },
  "taps": [ { "delay_s": 0.0, "amplitude": 1.0 } ],
  "rectenna": { "k2": 0.0034, "k4": 0.3829 },
  "budget": { "p_watt": 1e-5 },
  "noise": { "sigma2_watt": 1e-7 }
})";
}  // namespace

TEST_CASE("version and status names are stable strings") {
  CHECK(std::strlen(swipt_version()) > 0);
  CHECK(std::string(swipt_status_name(SWIPT_OK)) == "ok");
  CHECK(std::string(swipt_status_name(SWIPT_ERR_INFEASIBLE)) == "infeasible");
  CHECK(std::string(swipt_run_status_name(SWIPT_RUN_OPTIMAL)) == "optimal");
}

TEST_CASE("scenario loading and introspection") {
  swipt_scenario* scenario = nullptr;
  REQUIRE(swipt_scenario_load(kScenarioPath.c_str(), &scenario) == SWIPT_OK);
  CHECK(swipt_scenario_num_tones(scenario) == 16);
  CHECK(swipt_scenario_num_antennas(scenario) == 1);
  CHECK(swipt_scenario_power_budget(scenario) == doctest::Approx(1e-5));
  CHECK(swipt_scenario_max_rate(scenario) > 0.0);
  swipt_scenario_free(scenario);

  swipt_scenario* missing = nullptr;
  CHECK(swipt_scenario_load("/nonexistent/file.json", &missing) == SWIPT_ERR_IO);
  CHECK(std::strlen(swipt_last_error()) > 0);
  CHECK(swipt_scenario_parse("{ not json", &missing) == SWIPT_ERR_PARSE);
  CHECK(swipt_scenario_load(nullptr, &missing) == SWIPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("optimize, design round trip and oracle agreement") {
  swipt_scenario* scenario = nullptr;
  REQUIRE(swipt_scenario_parse(kTinyScenario, &scenario) == SWIPT_OK);

  swipt_options opts;
  swipt_options_init(&opts);
  opts.rate_floor_bits = 0.7 * swipt_scenario_max_rate(scenario);

  swipt_result* result = nullptr;
  REQUIRE(swipt_optimize(scenario, &opts, &result) == SWIPT_OK);
  CHECK(swipt_result_status(result) == SWIPT_RUN_OPTIMAL);
  CHECK(swipt_result_zdc(result) > 0.0);
  CHECK(swipt_result_rate(result) >= opts.rate_floor_bits * (1.0 - 1e-9));
  CHECK(swipt_result_rho(result) > 0.0);
  CHECK(swipt_result_iterations(result) > 0);

  const int traj_len = swipt_result_trajectory(result, nullptr, 0);
  REQUIRE(traj_len > 0);
  std::vector<double> trajectory(traj_len);
  CHECK(swipt_result_trajectory(result, trajectory.data(), traj_len) == traj_len);
  for (int i = 1; i < traj_len; ++i)
    CHECK(trajectory[i] >= trajectory[i - 1] * (1.0 - 1e-9));

  swipt_design* design = nullptr;
  REQUIRE(swipt_result_design(result, &design) == SWIPT_OK);
  CHECK(swipt_design_num_tones(design) == 2);
  CHECK(swipt_design_num_antennas(design) == 1);
  CHECK(swipt_design_rho(design) == doctest::Approx(swipt_result_rho(result)));

  double buffer[2] = {0.0, 0.0};
  CHECK(swipt_design_matrix(design, SWIPT_MATRIX_INFO_AMPLITUDES, buffer, 2) == SWIPT_OK);
  CHECK(buffer[0] > 0.0);
  CHECK(swipt_design_matrix(design, SWIPT_MATRIX_INFO_AMPLITUDES, buffer, 1) ==
        SWIPT_ERR_DIMENSION);

  const std::string path =
      (std::filesystem::temp_directory_path() / "swipt_capi_design.json").string();
  REQUIRE(swipt_design_save(design, path.c_str()) == SWIPT_OK);
  swipt_design* reloaded = nullptr;
  REQUIRE(swipt_design_load(path.c_str(), &reloaded) == SWIPT_OK);
  CHECK(swipt_design_rho(reloaded) == doctest::Approx(swipt_design_rho(design)));
  std::filesystem::remove(path);

  swipt_oracle_report* report = nullptr;
  REQUIRE(swipt_oracle(scenario, reloaded, 4000, 7, &report) == SWIPT_OK);
  CHECK(swipt_oracle_analytic(report) == doctest::Approx(swipt_result_zdc(result)).epsilon(1e-6));
  CHECK(swipt_oracle_within_three_sigma(report) == 1);
  CHECK(swipt_oracle_carrier_multiple(report) >= 8);
  CHECK(swipt_oracle_sample_rate(report) > 0.0);
  CHECK(swipt_oracle_samples_per_period(report) > 0);

  // Identical seeds reproduce the estimate exactly.
  swipt_oracle_report* again = nullptr;
  REQUIRE(swipt_oracle(scenario, reloaded, 4000, 7, &again) == SWIPT_OK);
  CHECK(swipt_oracle_estimate(again) == swipt_oracle_estimate(report));

  swipt_oracle_report_free(again);
  swipt_oracle_report_free(report);
  swipt_design_free(reloaded);
  swipt_design_free(design);
  swipt_result_free(result);
  swipt_scenario_free(scenario);
}

TEST_CASE("infeasible floors surface as status codes") {
  swipt_scenario* scenario = nullptr;
  REQUIRE(swipt_scenario_parse(kTinyScenario, &scenario) == SWIPT_OK);
  swipt_options opts;
  swipt_options_init(&opts);
  opts.rate_floor_bits = 1e9;
  swipt_result* result = nullptr;
  CHECK(swipt_optimize(scenario, &opts, &result) == SWIPT_ERR_INFEASIBLE);
  CHECK(std::string(swipt_last_error()).find("maximum achievable") != std::string::npos);
  swipt_scenario_free(scenario);
}

TEST_CASE("sweep points through the C surface") {
  swipt_scenario* scenario = nullptr;
  REQUIRE(swipt_scenario_parse(kTinyScenario, &scenario) == SWIPT_OK);
  swipt_options opts;
  swipt_options_init(&opts);
  opts.sweep_points = 5;

  swipt_region* region = nullptr;
  REQUIRE(swipt_sweep(scenario, &opts, &region) == SWIPT_OK);
  REQUIRE(swipt_region_size(region) == 5);
  double prev_rate = -1.0;
  for (int i = 0; i < 5; ++i) {
    double rate = 0.0, zdc = 0.0, rho = 0.0;
    int iterations = 0;
    swipt_run_status status = SWIPT_RUN_INFEASIBLE;
    REQUIRE(swipt_region_point(region, i, &rate, &zdc, &rho, &iterations, &status) == SWIPT_OK);
    CHECK(status == SWIPT_RUN_OPTIMAL);
    CHECK(rate >= prev_rate);
    prev_rate = rate;
  }
  CHECK(swipt_region_point(region, 99, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        SWIPT_ERR_INVALID_ARGUMENT);
  swipt_region_free(region);
  swipt_scenario_free(scenario);
}

TEST_CASE("validation battery reports named checks") {
  swipt_scenario* scenario = nullptr;
  REQUIRE(swipt_scenario_parse(kTinyScenario, &scenario) == SWIPT_OK);
  swipt_check_table* table = nullptr;
  REQUIRE(swipt_validate(scenario, 1, &table) == SWIPT_OK);
  const int count = swipt_check_table_size(table);
  CHECK(count >= 5);
  bool saw_gap_check = false;
  for (int i = 0; i < count; ++i) {
    CHECK(std::strlen(swipt_check_name(table, i)) > 0);
    CHECK(std::strlen(swipt_check_detail(table, i)) > 0);
    CHECK(swipt_check_passed(table, i) == 1);
    if (std::string(swipt_check_name(table, i)) == "brute-force-gap") saw_gap_check = true;
  }
  CHECK(saw_gap_check);  // two-tone single-antenna scenarios include it
  swipt_check_table_free(table);
  swipt_scenario_free(scenario);
}
