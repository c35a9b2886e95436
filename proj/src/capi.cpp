// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/swiptwave.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "swiptwave/diagnostics.hpp"
#include "swiptwave/errors.hpp"
#include "swiptwave/optimizer.hpp"
#include "swiptwave/scenario.hpp"
#include "swiptwave/version.hpp"

// Opaque handle bodies. They wrap the C++ value types one-to-one.
struct swipt_scenario {
  swipt::Scenario scenario;
  swipt::FrequencyResponse channel;
};
struct swipt_design {
  swipt::WaveformDesign design;
};
struct swipt_result {
  swipt::OptimizedDesign result;
};
struct swipt_region {
  std::vector<swipt::RateEnergyPoint> points;
};
struct swipt_oracle_report {
  swipt::MonteCarloReport report;
  double analytic = 0.0;
};
struct swipt_check_table {
  std::vector<swipt::CheckResult> checks;
};

namespace {

thread_local std::string g_last_error;

swipt_status fail(swipt_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps C++ exceptions onto status codes at the boundary.
template <typename Fn>
swipt_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const swipt::InfeasibleRateError& e) {
    return fail(SWIPT_ERR_INFEASIBLE, e.what());
  } catch (const swipt::ScenarioError& e) {
    return fail(SWIPT_ERR_PARSE, e.what());
  } catch (const swipt::DimensionError& e) {
    return fail(SWIPT_ERR_DIMENSION, e.what());
  } catch (const swipt::DomainError& e) {
    return fail(SWIPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const swipt::Error& e) {
    return fail(SWIPT_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SWIPT_ERR_INTERNAL, e.what());
  }
}

swipt_run_status to_c(swipt::RunStatus status) {
  switch (status) {
    case swipt::RunStatus::optimal:
      return SWIPT_RUN_OPTIMAL;
    case swipt::RunStatus::max_iterations:
      return SWIPT_RUN_MAX_ITERATIONS;
    case swipt::RunStatus::infeasible:
      break;
  }
  return SWIPT_RUN_INFEASIBLE;
}

swipt::OptimizationConfig to_config(const swipt_options* options) {
  swipt::OptimizationConfig config;
  if (!options) return config;
  config.epsilon = options->epsilon;
  config.max_iterations = options->max_iterations;
  config.rate_floor_bits = options->rate_floor_bits;
  if (options->freeze_rho >= 0.0) config.freeze_rho = options->freeze_rho;
  config.wit_only = options->wit_only != 0;
  config.independent_points = options->independent_points != 0;
  return config;
}

}  // namespace

extern "C" {

const char* swipt_version(void) { return SWIPTWAVE_VERSION; }

const char* swipt_status_name(swipt_status status) {
  switch (status) {
    case SWIPT_OK:
      return "ok";
    case SWIPT_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case SWIPT_ERR_PARSE:
      return "parse-error";
    case SWIPT_ERR_INFEASIBLE:
      return "infeasible";
    case SWIPT_ERR_DIMENSION:
      return "dimension-mismatch";
    case SWIPT_ERR_IO:
      return "io-error";
    case SWIPT_ERR_INTERNAL:
      return "internal-error";
  }
  return "unknown";
}

const char* swipt_run_status_name(swipt_run_status status) {
  switch (status) {
    case SWIPT_RUN_OPTIMAL:
      return "optimal";
    case SWIPT_RUN_MAX_ITERATIONS:
      return "max-iterations";
    case SWIPT_RUN_INFEASIBLE:
      return "infeasible";
  }
  return "unknown";
}

const char* swipt_last_error(void) { return g_last_error.c_str(); }

swipt_status swipt_scenario_load(const char* path, swipt_scenario** out) {
  if (!path || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_scenario>();
    handle->scenario = swipt::load_scenario(path);
    handle->channel = handle->scenario.channel();
    *out = handle.release();
    return SWIPT_OK;
  });
}

swipt_status swipt_scenario_parse(const char* text, swipt_scenario** out) {
  if (!text || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_scenario>();
    handle->scenario = swipt::parse_scenario(text);
    handle->channel = handle->scenario.channel();
    *out = handle.release();
    return SWIPT_OK;
  });
}

void swipt_scenario_free(swipt_scenario* scenario) { delete scenario; }

int swipt_scenario_num_tones(const swipt_scenario* s) {
  return s ? s->scenario.grid.num_tones : 0;
}

int swipt_scenario_num_antennas(const swipt_scenario* s) {
  return s ? s->scenario.geometry.num_antennas : 0;
}

double swipt_scenario_power_budget(const swipt_scenario* s) {
  return s ? s->scenario.budget.p_watt : 0.0;
}

double swipt_scenario_max_rate(const swipt_scenario* s) {
  if (!s) return 0.0;
  return swipt::waterfilling(s->channel.amplitudes(), s->scenario.noise,
                             2.0 * s->scenario.budget.p_watt)
      .max_rate_bits;
}

void swipt_options_init(swipt_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof(*options));
  options->epsilon = 1e-6;
  options->max_iterations = 100;
  options->rate_floor_bits = 0.0;
  options->freeze_rho = -1.0;
  options->sweep_points = 20;
  options->seed = 1;
}

swipt_status swipt_optimize(const swipt_scenario* scenario, const swipt_options* options,
                            swipt_result** out) {
  if (!scenario || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_result>();
    const swipt::OptimizationConfig config = to_config(options);
    if (config.rate_floor_bits <= 0.0 && !config.wit_only && !config.freeze_rho) {
      handle->result = swipt::wpt_only(scenario->channel, scenario->scenario.rectenna,
                                       scenario->scenario.budget, config);
    } else {
      handle->result = swipt::algorithm1(scenario->channel, scenario->scenario.rectenna,
                                         scenario->scenario.noise, scenario->scenario.budget,
                                         config);
    }
    *out = handle.release();
    return SWIPT_OK;
  });
}

void swipt_result_free(swipt_result* result) { delete result; }

swipt_run_status swipt_result_status(const swipt_result* r) {
  return r ? to_c(r->result.status) : SWIPT_RUN_INFEASIBLE;
}

double swipt_result_zdc(const swipt_result* r) { return r ? r->result.zdc : 0.0; }
double swipt_result_rate(const swipt_result* r) { return r ? r->result.rate_bits : 0.0; }
double swipt_result_rho(const swipt_result* r) { return r ? r->result.design.rho : 0.0; }
int swipt_result_iterations(const swipt_result* r) { return r ? r->result.iterations : 0; }

int swipt_result_trajectory(const swipt_result* r, double* buffer, int cap) {
  if (!r) return 0;
  const auto& traj = r->result.trajectory;
  if (buffer) {
    const int count = std::min(cap, static_cast<int>(traj.size()));
    for (int i = 0; i < count; ++i) buffer[i] = traj[i];
  }
  return static_cast<int>(traj.size());
}

swipt_status swipt_result_design(const swipt_result* r, swipt_design** out) {
  if (!r || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  *out = new swipt_design{r->result.design};
  return SWIPT_OK;
}

void swipt_design_free(swipt_design* design) { delete design; }

int swipt_design_num_tones(const swipt_design* d) { return d ? d->design.num_tones() : 0; }
int swipt_design_num_antennas(const swipt_design* d) { return d ? d->design.num_antennas() : 0; }
double swipt_design_rho(const swipt_design* d) { return d ? d->design.rho : 0.0; }

swipt_status swipt_design_matrix(const swipt_design* d, swipt_matrix_kind kind, double* buffer,
                                 size_t cap) {
  if (!d || !buffer) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  const swipt::Matrix* m = nullptr;
  switch (kind) {
    case SWIPT_MATRIX_POWER_AMPLITUDES:
      m = &d->design.s_p;
      break;
    case SWIPT_MATRIX_INFO_AMPLITUDES:
      m = &d->design.s_i;
      break;
    case SWIPT_MATRIX_POWER_PHASES:
      m = &d->design.phi_p;
      break;
    case SWIPT_MATRIX_INFO_PHASES:
      m = &d->design.phi_i;
      break;
  }
  if (!m) return fail(SWIPT_ERR_INVALID_ARGUMENT, "unknown matrix kind");
  if (cap < m->data().size()) return fail(SWIPT_ERR_DIMENSION, "buffer too small");
  std::memcpy(buffer, m->data().data(), m->data().size() * sizeof(double));
  return SWIPT_OK;
}

swipt_status swipt_design_save(const swipt_design* d, const char* path) {
  if (!d || !path) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    swipt::save_design(d->design, path);
    return SWIPT_OK;
  });
}

swipt_status swipt_design_load(const char* path, swipt_design** out) {
  if (!path || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_design>();
    handle->design = swipt::load_design(path);
    *out = handle.release();
    return SWIPT_OK;
  });
}

swipt_status swipt_sweep(const swipt_scenario* scenario, const swipt_options* options,
                         swipt_region** out) {
  if (!scenario || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const swipt::OptimizationConfig config = to_config(options);
    const int points = options && options->sweep_points > 0 ? options->sweep_points : 20;
    const auto grid = swipt::default_rate_grid(scenario->channel, scenario->scenario.noise,
                                               scenario->scenario.budget, points);
    auto handle = std::make_unique<swipt_region>();
    handle->points =
        swipt::sweep_region(scenario->channel, scenario->scenario.rectenna,
                            scenario->scenario.noise, scenario->scenario.budget, grid, config);
    *out = handle.release();
    return SWIPT_OK;
  });
}

void swipt_region_free(swipt_region* region) { delete region; }

int swipt_region_size(const swipt_region* region) {
  return region ? static_cast<int>(region->points.size()) : 0;
}

swipt_status swipt_region_point(const swipt_region* region, int index, double* rate_bits,
                                double* zdc, double* rho, int* iterations,
                                swipt_run_status* status) {
  if (!region || index < 0 || index >= static_cast<int>(region->points.size()))
    return fail(SWIPT_ERR_INVALID_ARGUMENT, "point index out of range");
  const swipt::RateEnergyPoint& p = region->points[index];
  if (rate_bits) *rate_bits = p.rate_bits;
  if (zdc) *zdc = p.zdc;
  if (rho) *rho = p.rho;
  if (iterations) *iterations = p.iterations;
  if (status) *status = to_c(p.status);
  return SWIPT_OK;
}

swipt_status swipt_oracle(const swipt_scenario* scenario, const swipt_design* design,
                          uint64_t num_symbols, uint64_t seed, swipt_oracle_report** out) {
  if (!scenario || !design || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_oracle_report>();
    handle->analytic = swipt::zdc(design->design, scenario->channel, scenario->scenario.rectenna);
    handle->report = swipt::monte_carlo_zdc(design->design, scenario->scenario.taps,
                                            scenario->scenario.geometry, scenario->scenario.grid,
                                            scenario->scenario.rectenna, num_symbols, seed);
    *out = handle.release();
    return SWIPT_OK;
  });
}

void swipt_oracle_report_free(swipt_oracle_report* report) { delete report; }

double swipt_oracle_analytic(const swipt_oracle_report* r) { return r ? r->analytic : 0.0; }
double swipt_oracle_estimate(const swipt_oracle_report* r) { return r ? r->report.estimate : 0.0; }
double swipt_oracle_std_error(const swipt_oracle_report* r) {
  return r ? r->report.std_error : 0.0;
}
int swipt_oracle_carrier_multiple(const swipt_oracle_report* r) {
  return r ? r->report.carrier_multiple : 0;
}
double swipt_oracle_sample_rate(const swipt_oracle_report* r) {
  return r ? r->report.sample_rate_hz : 0.0;
}
int swipt_oracle_samples_per_period(const swipt_oracle_report* r) {
  return r ? r->report.samples_per_period : 0;
}

int swipt_oracle_within_three_sigma(const swipt_oracle_report* r) {
  if (!r) return 0;
  const double sigma = std::max(r->report.std_error, 1e-18 * std::abs(r->analytic));
  return std::abs(r->report.estimate - r->analytic) <= 3.0 * sigma ? 1 : 0;
}

swipt_status swipt_validate(const swipt_scenario* scenario, uint64_t seed,
                            swipt_check_table** out) {
  if (!scenario || !out) return fail(SWIPT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<swipt_check_table>();
    handle->checks = swipt::run_validation(scenario->scenario, seed);
    *out = handle.release();
    return SWIPT_OK;
  });
}

void swipt_check_table_free(swipt_check_table* table) { delete table; }

int swipt_check_table_size(const swipt_check_table* table) {
  return table ? static_cast<int>(table->checks.size()) : 0;
}

const char* swipt_check_name(const swipt_check_table* table, int index) {
  if (!table || index < 0 || index >= static_cast<int>(table->checks.size())) return "";
  return table->checks[index].name.c_str();
}

int swipt_check_passed(const swipt_check_table* table, int index) {
  if (!table || index < 0 || index >= static_cast<int>(table->checks.size())) return 0;
  return table->checks[index].passed ? 1 : 0;
}

const char* swipt_check_detail(const swipt_check_table* table, int index) {
  if (!table || index < 0 || index >= static_cast<int>(table->checks.size())) return "";
  return table->checks[index].detail.c_str();
}

}  // extern "C"
