// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/diagnostics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "swiptwave/optimizer.hpp"
#include "swiptwave/rng.hpp"

namespace swipt {

namespace {

using gp::GpProblem;
using gp::Monomial;
using gp::Posynomial;

constexpr double kPi = 3.1415926535897932384626433832795;

GpBatteryCase make_case(std::string name, double expected, int num_vars,
                        const std::function<void(GpProblem&, std::vector<gp::VarId>&)>& fill) {
  GpBatteryCase c;
  c.name = std::move(name);
  std::vector<gp::VarId> ids;
  for (int i = 0; i < num_vars; ++i)
    ids.push_back(c.problem.vars.add(std::string(1, static_cast<char>('x' + i))));
  fill(c.problem, ids);
  c.initial.assign(num_vars, 1.0);
  c.expected_objective = expected;
  return c;
}

Posynomial mono(double coeff, gp::VarId v, double e) {
  return Posynomial(Monomial::variable(v, e).scale(coeff));
}

}  // namespace

std::vector<GpBatteryCase> gp_solver_battery() {
  std::vector<GpBatteryCase> battery;

  battery.push_back(make_case("box-corner", 1.0 / 6.0, 2, [](GpProblem& p, auto& v) {
    p.objective = Posynomial(Monomial::variable(v[0], -1).times(Monomial::variable(v[1], -1)));
    p.inequalities.push_back(mono(0.5, v[0], 1));
    p.inequalities.push_back(mono(1.0 / 3.0, v[1], 1));
  }));

  battery.push_back(make_case("am-gm", 2.0, 1, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], 1) + mono(1, v[0], -1);
  }));

  battery.push_back(make_case("epigraph", 2.0, 2, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], -1);
    p.inequalities.push_back(
        Posynomial(Monomial::variable(v[0], 2).times(Monomial::variable(v[1], 1))));
    p.inequalities.push_back(mono(4, v[1], -1));
  }));

  battery.push_back(make_case("product-floor", 2.0, 2, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], 1) + mono(1, v[1], 1);
    p.inequalities.push_back(
        Posynomial(Monomial::variable(v[0], -1).times(Monomial::variable(v[1], -1))));
  }));

  battery.push_back(make_case("mono-bound", 0.2, 1, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], -1);
    p.inequalities.push_back(mono(0.2, v[0], 1));
  }));

  battery.push_back(make_case("triple", 6.0, 3, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], 1) + mono(1, v[1], 1) + mono(1, v[2], 1);
    p.inequalities.push_back(Posynomial(Monomial::variable(v[0], -1)
                                            .times(Monomial::variable(v[1], -1))
                                            .times(Monomial::variable(v[2], -1))
                                            .scale(8.0)));
  }));

  battery.push_back(make_case("inverse-product", 1.0, 2, [](GpProblem& p, auto& v) {
    p.objective = Posynomial(Monomial::variable(v[0], -1).times(Monomial::variable(v[1], -1)));
    p.inequalities.push_back(mono(0.5, v[0], 1) + mono(0.5, v[1], 1));
  }));

  battery.push_back(make_case("quad-floor", 2.0, 2, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], 2) + mono(1, v[1], 2);
    p.inequalities.push_back(
        Posynomial(Monomial::variable(v[0], -1).times(Monomial::variable(v[1], -1))));
  }));

  battery.push_back(make_case("weighted", 2.0 * std::sqrt(6.0), 1, [](GpProblem& p, auto& v) {
    p.objective = mono(2, v[0], 1) + mono(3, v[0], -1);
  }));

  battery.push_back(make_case("equality", 2.0, 2, [](GpProblem& p, auto& v) {
    p.objective = mono(1, v[0], 1) + mono(1, v[1], 1);
    p.equalities.push_back(Monomial::variable(v[0], 1).times(Monomial::variable(v[1], 1)));
  }));

  return battery;
}

namespace {

Posynomial random_posynomial(Rng& rng, int num_vars, int num_terms) {
  Posynomial p;
  for (int k = 0; k < num_terms; ++k) {
    Monomial m = Monomial::constant(std::exp(rng.uniform(-3.0, 3.0)));
    for (int v = 0; v < num_vars; ++v)
      if (rng.uniform() < 0.7) m = m.times(Monomial::variable(v, rng.uniform(-2.0, 2.0)));
    p += m;
  }
  return p;
}

std::vector<double> random_point(Rng& rng, int num_vars) {
  std::vector<double> x(num_vars);
  for (double& v : x) v = std::exp(rng.uniform(-1.5, 1.5));
  return x;
}

CheckResult check_amgm(uint64_t seed, int rounds) {
  CheckResult res{"amgm-dominance", true, ""};
  int worst_round = -1;
  double worst_excess = 0.0;
  for (int i = 0; i < rounds; ++i) {
    Rng rng(Rng::derive(seed, 1000 + i));
    const int num_vars = 1 + static_cast<int>(rng.uniform() * 4);
    const int num_terms = 1 + static_cast<int>(rng.uniform() * 6);
    const Posynomial p = random_posynomial(rng, num_vars, num_terms);
    const auto anchor = random_point(rng, num_vars);
    const auto weights = gp::weights_from_point(p, anchor);
    const Monomial bound = gp::condense(p, weights);

    // Tight at the anchor, below everywhere else.
    const double at_anchor = std::abs(bound.evaluate(anchor) - p.evaluate(anchor)) /
                             std::max(p.evaluate(anchor), 1e-300);
    if (at_anchor > 1e-9) {
      res.passed = false;
      worst_excess = std::max(worst_excess, at_anchor);
      worst_round = i;
    }
    for (int probe = 0; probe < 8; ++probe) {
      const auto x = random_point(rng, num_vars);
      const double excess = bound.evaluate(x) - p.evaluate(x) * (1.0 + 1e-12);
      if (excess > 0.0) {
        res.passed = false;
        worst_excess = std::max(worst_excess, excess / std::max(p.evaluate(x), 1e-300));
        worst_round = i;
      }
    }
  }
  std::ostringstream detail;
  if (res.passed)
    detail << rounds << " random posynomials dominated, tight at anchors";
  else
    detail << "violated at round " << worst_round << " (relative excess " << worst_excess << ")";
  res.detail = detail.str();
  return res;
}

CheckResult check_matched_phases(const Scenario& scenario, uint64_t seed, int channels,
                                 int perturbations) {
  CheckResult res{"matched-phase-optimality", true, ""};
  const int n = std::min(scenario.grid.num_tones, 4);
  const int m = scenario.geometry.num_antennas;
  NoiseProfile noise;
  noise.sigma2_watt.assign(scenario.noise.sigma2_watt.begin(),
                           scenario.noise.sigma2_watt.begin() + n);
  int failures = 0;
  for (int c = 0; c < channels; ++c) {
    Rng rng(Rng::derive(seed, 2000 + c));
    std::vector<std::complex<double>> gains(static_cast<size_t>(n) * m);
    for (auto& g : gains)
      g = std::polar(std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(-kPi, kPi));
    const FrequencyResponse channel(n, m, std::move(gains));

    // Amplitudes scaled so the proxy stays near unity: the dominance slack
    // is absolute and must sit well above float roundoff.
    WaveformDesign design = WaveformDesign::zeros(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        design.s_p(i, j) = 0.01 * rng.uniform(0.05, 1.0);
        design.s_i(i, j) = 0.01 * rng.uniform(0.05, 1.0);
      }
    design.rho = rng.uniform(0.1, 0.9);
    auto [phi_p, phi_i] = matched_phases(channel);
    design.phi_p = phi_p;
    design.phi_i = phi_i;
    const double z_matched = zdc(design, channel, scenario.rectenna);
    const double r_matched =
        rate_general(design.s_i, Matrix(n, m), design.rho, channel.amplitudes(), noise);

    for (int k = 0; k < perturbations; ++k) {
      WaveformDesign twisted = design;
      Matrix psi_i(n, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
          twisted.phi_p(i, j) += rng.uniform(-kPi, kPi);
          twisted.phi_i(i, j) += rng.uniform(-kPi, kPi);
          psi_i(i, j) = twisted.phi_i(i, j) + channel.phase(i, j);
        }
      if (zdc(twisted, channel, scenario.rectenna) > z_matched + 1e-12) ++failures;
      if (rate_general(twisted.s_i, psi_i, twisted.rho, channel.amplitudes(), noise) >
          r_matched + 1e-12)
        ++failures;
    }
  }
  res.passed = failures == 0;
  std::ostringstream detail;
  detail << channels << " channels x " << perturbations << " perturbations, " << failures
         << " dominance failures";
  res.detail = detail.str();
  return res;
}

CheckResult check_gp_battery() {
  CheckResult res{"gp-solver-battery", true, ""};
  double worst = 0.0;
  std::string failing;
  for (const GpBatteryCase& c : gp_solver_battery()) {
    const gp::GpSolution sol = gp::solve_gp(c.problem, c.initial);
    const double rel =
        std::abs(sol.objective_value - c.expected_objective) / std::abs(c.expected_objective);
    if (rel > 1e-6 || sol.status != gp::GpStatus::optimal) {
      res.passed = false;
      if (rel > worst) failing = c.name;
    }
    worst = std::max(worst, rel);
  }
  std::ostringstream detail;
  detail << "worst relative objective error " << worst;
  if (!failing.empty()) detail << " (" << failing << ")";
  res.detail = detail.str();
  return res;
}

Scenario reduced(const Scenario& scenario, int max_tones) {
  Scenario small = scenario;
  if (small.grid.num_tones > max_tones) {
    small.grid.num_tones = max_tones;
    small.noise.sigma2_watt.resize(max_tones);
  }
  return small;
}

CheckResult check_endpoints(const Scenario& scenario, const OptimizationConfig& base) {
  CheckResult res{"endpoint-consistency", true, ""};
  const Scenario small = reduced(scenario, 4);
  const FrequencyResponse channel = small.channel();
  OptimizationConfig config = base;

  const double cap =
      waterfilling(channel.amplitudes(), small.noise, 2.0 * small.budget.p_watt).max_rate_bits;
  const auto points = sweep_region(channel, small.rectenna, small.noise, small.budget,
                                   {0.0, cap}, config);
  const OptimizedDesign wpt = wpt_only(channel, small.rectenna, small.budget, config);

  std::ostringstream detail;
  const double z_gap = std::abs(points.front().zdc - wpt.zdc) / std::max(wpt.zdc, 1e-300);
  const double r_gap = std::abs(points.back().rate_bits - cap) / std::max(cap, 1e-300);
  detail << "energy endpoint gap " << z_gap << ", rate endpoint gap " << r_gap;
  res.detail = detail.str();
  res.passed = z_gap <= 1e-9 && r_gap <= 1e-6 && points.front().rate_bits == 0.0;
  return res;
}

CheckResult check_oracle(const Scenario& scenario, uint64_t seed) {
  CheckResult res{"oracle-agreement", true, ""};
  const Scenario small = reduced(scenario, 4);
  const FrequencyResponse channel = small.channel();
  const int n = small.grid.num_tones, m = small.geometry.num_antennas;

  Rng rng(Rng::derive(seed, 3000));
  WaveformDesign design = WaveformDesign::zeros(n, m);
  const double scale = std::sqrt(small.budget.p_watt / (n * m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      design.s_p(i, j) = scale * rng.uniform(0.2, 1.0);
      design.s_i(i, j) = scale * rng.uniform(0.2, 1.0);
    }
  design.rho = 0.6;
  auto [phi_p, phi_i] = matched_phases(channel);
  design.phi_p = phi_p;
  design.phi_i = phi_i;

  const double analytic = zdc(design, channel, small.rectenna);
  const MonteCarloReport mc = monte_carlo_zdc(design, small.taps, small.geometry, small.grid,
                                              small.rectenna, 4000, seed);
  const double sigma = std::max(mc.std_error, 1e-18 * std::abs(analytic));
  const double pull = std::abs(mc.estimate - analytic) / sigma;
  std::ostringstream detail;
  detail << "analytic " << analytic << ", estimate " << mc.estimate << " (" << pull
         << " standard errors)";
  res.detail = detail.str();
  res.passed = pull <= 3.0;
  return res;
}

CheckResult check_brute_force(const Scenario& scenario, const OptimizationConfig& base) {
  CheckResult res{"brute-force-gap", true, ""};
  const FrequencyResponse channel = scenario.channel();
  OptimizationConfig config = base;
  config.rate_floor_bits = 0.0;
  const OptimizedDesign od = algorithm1(channel, scenario.rectenna, scenario.noise,
                                        scenario.budget, config);
  const auto ref = brute_force(channel, scenario.rectenna, scenario.noise, scenario.budget,
                               0.0, 1e-2);
  if (!ref) {
    res.passed = false;
    res.detail = "exhaustive search returned no feasible point";
    return res;
  }
  const double gap = (ref->zdc - od.zdc) / std::max(ref->zdc, 1e-300);
  std::ostringstream detail;
  detail << "relative gap to the grid optimum " << gap;
  res.detail = detail.str();
  res.passed = gap <= 0.02;
  return res;
}

}  // namespace

std::vector<CheckResult> run_validation(const Scenario& scenario, uint64_t seed) {
  scenario.validate();
  OptimizationConfig config;  // defaults
  std::vector<CheckResult> results;
  results.push_back(check_amgm(seed, 200));
  results.push_back(check_matched_phases(scenario, seed, 5, 40));
  results.push_back(check_gp_battery());
  results.push_back(check_endpoints(scenario, config));
  results.push_back(check_oracle(scenario, seed));
  if (scenario.grid.num_tones * scenario.geometry.num_antennas <= 2)
    results.push_back(check_brute_force(scenario, config));
  return results;
}

}  // namespace swipt
