// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "swiptwave/errors.hpp"

namespace swipt {

namespace {

constexpr double kAmplitudeFloor = 1e-12;
constexpr double kLn2 = 0.69314718055994530941723212145818;

double rate_from_rhobar(const Matrix& s_i, double rho_bar, const Matrix& a,
                        const NoiseProfile& noise) {
  double bits = 0.0;
  for (int n = 0; n < s_i.rows(); ++n) {
    double coherent = 0.0;
    for (int m = 0; m < s_i.cols(); ++m) coherent += s_i(n, m) * a(n, m);
    bits += std::log2(1.0 + rho_bar * coherent * coherent / noise.sigma2_watt[n]);
  }
  return bits;
}

Matrix scaled_to_power(const Matrix& shape, double symbol_power) {
  const double norm_sq = shape.frobenius_sq();
  if (!(norm_sq > 0.0)) throw DomainError("channel has no gain to shape an allocation");
  Matrix out = shape;
  out *= std::sqrt(symbol_power / norm_sq);
  return out;
}

const char* const kRunStatusNames[] = {"optimal", "max-iterations", "infeasible"};

}  // namespace

const char* to_string(RunStatus status) { return kRunStatusNames[static_cast<int>(status)]; }

void OptimizationConfig::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("convergence threshold must be positive");
  if (max_iterations < 1) throw DomainError("need at least one iteration");
  if (rate_floor_bits < 0.0) throw DomainError("rate floor must be nonnegative");
  if (freeze_rho && (*freeze_rho < 0.0 || *freeze_rho > 1.0))
    throw DomainError("frozen splitting ratio must lie in [0, 1]");
}

WaterfillingResult waterfilling(const Matrix& amplitudes, const NoiseProfile& noise,
                                double total_symbol_power) {
  if (!(total_symbol_power > 0.0)) throw DomainError("power must be positive");
  const int n_tones = amplitudes.rows();
  const int n_ant = amplitudes.cols();
  noise.validate(n_tones);

  std::vector<double> gain_sq(n_tones, 0.0);
  for (int n = 0; n < n_tones; ++n)
    for (int m = 0; m < n_ant; ++m) gain_sq[n] += amplitudes(n, m) * amplitudes(n, m);

  std::vector<double> threshold(n_tones);  // noise-to-gain level per tone
  double min_threshold = std::numeric_limits<double>::infinity();
  for (int n = 0; n < n_tones; ++n) {
    threshold[n] = gain_sq[n] > 0.0 ? noise.sigma2_watt[n] / gain_sq[n]
                                    : std::numeric_limits<double>::infinity();
    min_threshold = std::min(min_threshold, threshold[n]);
  }
  if (!std::isfinite(min_threshold)) throw DomainError("channel has no gain on any tone");

  auto allocated = [&](double level) {
    double sum = 0.0;
    for (int n = 0; n < n_tones; ++n) sum += std::max(0.0, level - threshold[n]);
    return sum;
  };
  double lo = min_threshold, hi = min_threshold + total_symbol_power;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (allocated(mid) < total_symbol_power ? lo : hi) = mid;
  }
  const double level = 0.5 * (lo + hi);

  WaterfillingResult result;
  result.water_level = level;
  result.tone_powers.assign(n_tones, 0.0);
  double sum = 0.0;
  for (int n = 0; n < n_tones; ++n) {
    result.tone_powers[n] = std::max(0.0, level - threshold[n]);
    sum += result.tone_powers[n];
  }
  // Exact budget despite bisection residue.
  if (sum > 0.0)
    for (double& p : result.tone_powers) p *= total_symbol_power / sum;

  result.s_i = Matrix(n_tones, n_ant);
  result.max_rate_bits = 0.0;
  for (int n = 0; n < n_tones; ++n) {
    const double p_n = result.tone_powers[n];
    if (p_n <= 0.0 || gain_sq[n] <= 0.0) continue;
    const double scale = std::sqrt(p_n / gain_sq[n]);
    for (int m = 0; m < n_ant; ++m) result.s_i(n, m) = scale * amplitudes(n, m);
    result.max_rate_bits += std::log2(1.0 + p_n * gain_sq[n] / noise.sigma2_watt[n]);
  }
  return result;
}

namespace {

struct BuilderOptions {
  bool with_wpt = true;
  bool with_wit = true;
  std::optional<double> fixed_rho;
};

// Holds the exact posynomials of the energy-maximization problem and stamps
// out the condensed standard-form program for a given anchor. The
// posynomial structure is built once and reused across iterations.
class SwiptGpBuilder {
 public:
  SwiptGpBuilder(const Matrix& a, const RectennaParams& rect, const NoiseProfile& noise,
                 double power_budget, double rate_floor_bits, BuilderOptions opts)
      : n_(a.rows()), m_(a.cols()), opts_(opts), rate_floor_bits_(rate_floor_bits) {
    rect.validate();
    noise.validate(n_);
    if (!(power_budget > 0.0)) throw DomainError("power budget must be positive");
    if (rate_floor_bits_ > 0.0 && !opts_.with_wit)
      throw DomainError("a rate floor requires the information waveform");

    using gp::Monomial;
    using gp::Posynomial;

    if (opts_.with_wpt) {
      sp_id_.resize(static_cast<size_t>(n_) * m_, -1);
      for (int n = 0; n < n_; ++n)
        for (int m = 0; m < m_; ++m)
          sp_id_[static_cast<size_t>(n) * m_ + m] =
              vars_.add("sP[" + std::to_string(n) + "," + std::to_string(m) + "]");
    }
    if (opts_.with_wit) {
      si_id_.resize(static_cast<size_t>(n_) * m_, -1);
      for (int n = 0; n < n_; ++n)
        for (int m = 0; m < m_; ++m)
          si_id_[static_cast<size_t>(n) * m_ + m] =
              vars_.add("sI[" + std::to_string(n) + "," + std::to_string(m) + "]");
    }
    if (!opts_.fixed_rho) {
      rho_id_ = vars_.add("rho");
      rhobar_id_ = vars_.add("rhobar");
    }
    t0_id_ = vars_.add("t0");

    // Per-tone coherent sums over antennas (skipping zero-gain entries,
    // which cannot enter a posynomial and contribute nothing).
    std::vector<Posynomial> b_sum(n_), c_sum(n_);
    for (int n = 0; n < n_; ++n)
      for (int m = 0; m < m_; ++m) {
        const double gain = a(n, m);
        if (gain <= 0.0) continue;
        if (opts_.with_wpt)
          b_sum[n] += Monomial::variable(sp_id_[static_cast<size_t>(n) * m_ + m]).scale(gain);
        if (opts_.with_wit)
          c_sum[n] += Monomial::variable(si_id_[static_cast<size_t>(n) * m_ + m]).scale(gain);
      }

    const double r = rect.r_ant_ohm;
    auto rho_power = [&](double exponent) {
      return opts_.fixed_rho ? Monomial::constant(std::pow(std::max(*opts_.fixed_rho, 1e-300),
                                                           exponent))
                             : Monomial::variable(rho_id_, exponent);
    };

    Posynomial p2_p, p2_i, quad;
    if (opts_.with_wpt) {
      for (int n = 0; n < n_; ++n)
        if (!b_sum[n].empty()) p2_p += b_sum[n] * b_sum[n];
      for (const auto& q : dc_quadruples(n_)) {
        if (b_sum[q[0]].empty() || b_sum[q[1]].empty() || b_sum[q[2]].empty() ||
            b_sum[q[3]].empty())
          continue;
        quad += b_sum[q[0]] * b_sum[q[1]] * b_sum[q[2]] * b_sum[q[3]];
      }
    }
    if (opts_.with_wit)
      for (int n = 0; n < n_; ++n)
        if (!c_sum[n].empty()) p2_i += c_sum[n] * c_sum[n];

    Posynomial z;
    const Monomial rho1 = rho_power(1.0);
    const Monomial rho2 = rho_power(2.0);
    if (!p2_p.empty()) z += rho1.times(Monomial::constant(0.5 * rect.k2 * r)) * p2_p;
    if (!p2_i.empty()) z += rho1.times(Monomial::constant(0.5 * rect.k2 * r)) * p2_i;
    if (!quad.empty()) z += rho2.times(Monomial::constant(0.375 * rect.k4 * r * r)) * quad;
    if (!p2_i.empty()) z += rho2.times(Monomial::constant(0.75 * rect.k4 * r * r)) * (p2_i * p2_i);
    if (!p2_p.empty() && !p2_i.empty())
      z += rho2.times(Monomial::constant(1.5 * rect.k4 * r * r)) * (p2_p * p2_i);
    if (z.empty()) throw DomainError("the DC proxy vanishes identically on this channel");
    zdc_ = z.merged();

    for (int id = 0; id < vars_.size(); ++id) {
      if (id == t0_id_ || id == rho_id_ || id == rhobar_id_) continue;
      power_ += Monomial::variable(id, 2.0).scale(0.5 / power_budget);
    }

    if (rate_floor_bits_ > 0.0) {
      const Monomial rhobar = opts_.fixed_rho
                                  ? Monomial::constant(std::max(1.0 - *opts_.fixed_rho, 1e-300))
                                  : Monomial::variable(rhobar_id_);
      rate_factors_.reserve(n_);
      for (int n = 0; n < n_; ++n) {
        Posynomial factor(Monomial::constant(1.0));
        if (!c_sum[n].empty()) {
          Posynomial coherent_sq = (c_sum[n] * c_sum[n]).merged();
          factor += rhobar.times(Monomial::constant(1.0 / noise.sigma2_watt[n])) * coherent_sq;
        }
        rate_factors_.push_back(std::move(factor));
      }
    }

    if (!opts_.fixed_rho) {
      splitter_ += Monomial::variable(rho_id_);
      splitter_ += Monomial::variable(rhobar_id_);
    }
  }

  int num_vars() const { return vars_.size(); }
  const gp::Posynomial& zdc() const { return zdc_; }

  std::vector<double> point_from(const AnchorPoint& anchor) const {
    if (anchor.s_p.rows() != n_ || anchor.s_p.cols() != m_ || anchor.s_i.rows() != n_ ||
        anchor.s_i.cols() != m_)
      throw DimensionError("anchor does not match the channel dimensions");
    std::vector<double> x(static_cast<size_t>(vars_.size()), 1.0);
    for (int n = 0; n < n_; ++n)
      for (int m = 0; m < m_; ++m) {
        if (opts_.with_wpt)
          x[sp_id_[static_cast<size_t>(n) * m_ + m]] = std::max(anchor.s_p(n, m), kAmplitudeFloor);
        if (opts_.with_wit)
          x[si_id_[static_cast<size_t>(n) * m_ + m]] = std::max(anchor.s_i(n, m), kAmplitudeFloor);
      }
    if (!opts_.fixed_rho) {
      x[rho_id_] = std::clamp(anchor.rho, kAmplitudeFloor, 1.0 - kAmplitudeFloor);
      x[rhobar_id_] = std::clamp(anchor.rho_bar, kAmplitudeFloor, 1.0 - kAmplitudeFloor);
    }
    x[t0_id_] = zdc_.evaluate(x) * (1.0 - 1e-3);
    return x;
  }

  AnchorPoint anchor_from(std::span<const double> values, const AnchorPoint& previous) const {
    AnchorPoint next = previous;
    next.s_p = Matrix(n_, m_);
    next.s_i = Matrix(n_, m_);
    for (int n = 0; n < n_; ++n)
      for (int m = 0; m < m_; ++m) {
        if (opts_.with_wpt) next.s_p(n, m) = values[sp_id_[static_cast<size_t>(n) * m_ + m]];
        if (opts_.with_wit) next.s_i(n, m) = values[si_id_[static_cast<size_t>(n) * m_ + m]];
      }
    if (opts_.fixed_rho) {
      next.rho = *opts_.fixed_rho;
      next.rho_bar = 1.0 - *opts_.fixed_rho;
    } else {
      next.rho = values[rho_id_];
      next.rho_bar = values[rhobar_id_];
    }
    return next;
  }

  gp::GpProblem problem_at(const AnchorPoint& anchor) const {
    using gp::Monomial;
    using gp::Posynomial;
    gp::GpProblem prob;
    prob.vars = vars_;
    prob.objective = Posynomial(Monomial::variable(t0_id_, -1.0));
    prob.inequalities.push_back(power_);

    const std::vector<double> point = point_from(anchor);
    const Monomial z_bound = gp::condense(zdc_, gp::weights_from_point(zdc_, point));
    prob.inequalities.push_back(
        Posynomial(Monomial::variable(t0_id_).times(z_bound.pow(-1.0))));

    if (rate_floor_bits_ > 0.0) {
      Monomial rate_mono = Monomial::from_log_coeff(rate_floor_bits_ * kLn2);
      for (const auto& factor : rate_factors_) {
        const Monomial bound = gp::condense(factor, gp::weights_from_point(factor, point));
        rate_mono = rate_mono.times(bound.pow(-1.0));
      }
      prob.inequalities.push_back(Posynomial(rate_mono));
    }

    if (!opts_.fixed_rho) prob.inequalities.push_back(splitter_);
    return prob;
  }

 private:
  int n_;
  int m_;
  BuilderOptions opts_;
  double rate_floor_bits_;
  gp::VarTable vars_;
  std::vector<int> sp_id_, si_id_;
  int rho_id_ = -1, rhobar_id_ = -1, t0_id_ = -1;
  gp::Posynomial zdc_;
  gp::Posynomial power_;
  std::vector<gp::Posynomial> rate_factors_;
  gp::Posynomial splitter_;
};

// Maximum rate achievable when the full budget feeds the information
// waveform and the decoder sees the rho_bar share of the received power.
double max_rate_bits(const Matrix& a, const NoiseProfile& noise, double power_budget,
                     double rho_bar) {
  NoiseProfile effective = noise;
  for (double& s : effective.sigma2_watt) s /= rho_bar;
  return waterfilling(a, effective, 2.0 * power_budget).max_rate_bits;
}

AnchorPoint default_anchor(const Matrix& a, const NoiseProfile& noise, double power_budget,
                           double rate_floor_bits, const BuilderOptions& opts) {
  const int n = a.rows(), m = a.cols();
  AnchorPoint anchor;
  anchor.s_p = Matrix(n, m);
  anchor.s_i = Matrix(n, m);
  if (opts.fixed_rho) {
    anchor.rho = *opts.fixed_rho;
    anchor.rho_bar = 1.0 - *opts.fixed_rho;
  }

  // Channel-shaped split of the budget across the two waveforms.
  const double share_p = opts.with_wpt ? (opts.with_wit ? 0.5 : 1.0) : 0.0;
  const double share_i = opts.with_wit ? 1.0 - share_p : 0.0;
  if (opts.with_wpt) anchor.s_p = scaled_to_power(a, 2.0 * power_budget * share_p);
  if (opts.with_wit) anchor.s_i = scaled_to_power(a, 2.0 * power_budget * share_i);

  if (rate_floor_bits <= 0.0 ||
      rate_from_rhobar(anchor.s_i, anchor.rho_bar, a, noise) >= rate_floor_bits * (1.0 + 1e-9))
    return anchor;

  // The even split cannot carry the floor; shape the information waveform
  // by water-filling and give the power waveform a sliver of the budget.
  const double rho_bar_cap = opts.fixed_rho ? 1.0 - *opts.fixed_rho : 1.0 - kAmplitudeFloor;
  double sliver = opts.with_wpt ? 1e-3 : 0.0;
  WaterfillingResult wf;
  double rate_cap = 0.0;
  for (;;) {
    wf = waterfilling(a, noise, 2.0 * power_budget * (1.0 - sliver));
    rate_cap = rate_from_rhobar(wf.s_i, rho_bar_cap, a, noise);
    if (rate_cap > rate_floor_bits * (1.0 + 1e-10) || sliver < 1e-12) break;
    sliver *= 0.25;
  }
  anchor.s_i = wf.s_i;
  if (opts.with_wpt) anchor.s_p = scaled_to_power(a, 2.0 * power_budget * std::max(sliver, 1e-12));

  if (!opts.fixed_rho) {
    // Split the slack between the floor and the cap so the anchor is
    // strictly rate-feasible with room for the condensation to move.
    const double target = 0.5 * (rate_floor_bits + rate_cap);
    double lo = kAmplitudeFloor, hi = rho_bar_cap;
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (rate_from_rhobar(anchor.s_i, mid, a, noise) < target ? lo : hi) = mid;
    }
    anchor.rho_bar = hi;
    anchor.rho = 1.0 - anchor.rho_bar;
  }
  return anchor;
}

OptimizedDesign waterfilling_endpoint(const FrequencyResponse& channel,
                                      const RectennaParams& rect, const NoiseProfile& noise,
                                      const PowerBudget& budget, const BuilderOptions& opts) {
  const Matrix& a = channel.amplitudes();
  const WaterfillingResult wf = waterfilling(a, noise, 2.0 * budget.p_watt);
  OptimizedDesign out;
  out.design = WaveformDesign::zeros(channel.num_tones(), channel.num_antennas());
  auto [phi_p, phi_i] = matched_phases(channel);
  out.design.phi_p = std::move(phi_p);
  out.design.phi_i = std::move(phi_i);
  out.design.s_i = wf.s_i;
  out.design.rho = opts.fixed_rho ? *opts.fixed_rho : kAmplitudeFloor;
  out.rho_bar = 1.0 - out.design.rho;
  out.rate_bits = rate_from_rhobar(out.design.s_i, out.rho_bar, a, noise);
  out.rate_bits_audit = out.rate_bits;
  out.zdc = zdc_matched(out.design.s_p, out.design.s_i, out.design.rho, a, rect);
  out.iterations = 0;
  out.trajectory = {};
  out.status = RunStatus::optimal;
  return out;
}

OptimizedDesign run_condensation(const FrequencyResponse& channel, const RectennaParams& rect,
                                 const NoiseProfile& noise, const PowerBudget& budget,
                                 const OptimizationConfig& config, const BuilderOptions& opts,
                                 const std::optional<AnchorPoint>& warm_start) {
  config.validate();
  budget.validate();
  const Matrix& a = channel.amplitudes();
  const int n = channel.num_tones(), m = channel.num_antennas();
  noise.validate(n);
  if (opts.fixed_rho && *opts.fixed_rho <= 0.0)
    throw DomainError("a zero splitting ratio makes the harvested output vanish identically");

  const double rate_floor = config.rate_floor_bits;
  if (rate_floor > 0.0) {
    const double rho_bar_cap = opts.fixed_rho ? 1.0 - *opts.fixed_rho : 1.0;
    if (!opts.with_wit || rho_bar_cap <= 0.0)
      throw InfeasibleRateError(rate_floor, 0.0);
    const double cap = max_rate_bits(a, noise, budget.p_watt, rho_bar_cap);
    if (rate_floor > cap * (1.0 + 1e-12)) throw InfeasibleRateError(rate_floor, cap);
    if (rate_floor >= cap * (1.0 - 1e-9))
      return waterfilling_endpoint(channel, rect, noise, budget, opts);
  }

  SwiptGpBuilder builder(a, rect, noise, budget.p_watt, rate_floor, opts);

  AnchorPoint anchor;
  bool have_anchor = false;
  if (warm_start) {
    const double ws_power =
        0.5 * (warm_start->s_p.frobenius_sq() + warm_start->s_i.frobenius_sq());
    const bool power_ok = ws_power <= budget.p_watt * (1.0 + 1e-9);
    const bool rate_ok = rate_floor <= 0.0 ||
                         rate_from_rhobar(warm_start->s_i, warm_start->rho_bar, a, noise) >=
                             rate_floor * (1.0 + 1e-12);
    if (power_ok && rate_ok) {
      anchor = *warm_start;
      have_anchor = true;
    }
  }
  if (!have_anchor) anchor = default_anchor(a, noise, budget.p_watt, rate_floor, opts);

  OptimizedDesign out;
  double z_prev = zdc_matched(anchor.s_p, anchor.s_i, anchor.rho, a, rect);
  out.status = RunStatus::max_iterations;
  out.iterate_power_max = 0.0;
  out.iterate_rate_min = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    const gp::GpProblem problem = builder.problem_at(anchor);
    const gp::GpSolution sol =
        gp::solve_gp(problem, builder.point_from(anchor), config.solver);
    if (sol.status == gp::GpStatus::infeasible) {
      if (out.trajectory.empty())
        throw Error("condensed program infeasible at the starting point (violation " +
                    std::to_string(sol.max_violation) + ")");
      break;
    }
    anchor = builder.anchor_from(sol.values, anchor);
    const double z_new = zdc_matched(anchor.s_p, anchor.s_i, anchor.rho, a, rect);
    out.trajectory.push_back(z_new);
    out.iterate_power_max = std::max(
        out.iterate_power_max, 0.5 * (anchor.s_p.frobenius_sq() + anchor.s_i.frobenius_sq()));
    if (rate_floor > 0.0)
      out.iterate_rate_min =
          std::min(out.iterate_rate_min, rate_from_rhobar(anchor.s_i, anchor.rho_bar, a, noise));
    const bool settled = std::abs(z_new - z_prev) < config.epsilon * std::max(z_new, 1e-300);
    z_prev = z_new;
    if (settled) {
      out.status = RunStatus::optimal;
      ++it;
      break;
    }
  }

  out.design = WaveformDesign::zeros(n, m);
  auto [phi_p, phi_i] = matched_phases(channel);
  out.design.phi_p = std::move(phi_p);
  out.design.phi_i = std::move(phi_i);
  if (opts.with_wpt) out.design.s_p = anchor.s_p;
  if (opts.with_wit) out.design.s_i = anchor.s_i;
  out.design.rho = std::clamp(anchor.rho, 0.0, 1.0);
  out.rho_bar = anchor.rho_bar;
  out.zdc = z_prev;
  out.rate_bits = opts.with_wit ? rate_from_rhobar(out.design.s_i, out.rho_bar, a, noise) : 0.0;
  out.rate_bits_audit = opts.with_wit ? rate(out.design.s_i, out.design.rho, a, noise) : 0.0;
  out.iterations = it;
  return out;
}

}  // namespace

gp::GpProblem build_condensed_gp(const Matrix& amplitudes, const RectennaParams& rect,
                                 const NoiseProfile& noise, double power_budget_watt,
                                 double rate_floor_bits, const AnchorPoint& anchor) {
  SwiptGpBuilder builder(amplitudes, rect, noise, power_budget_watt, rate_floor_bits, {});
  return builder.problem_at(anchor);
}

gp::Posynomial zdc_posynomial(const Matrix& amplitudes, const RectennaParams& rect) {
  const NoiseProfile noise = NoiseProfile::uniform(amplitudes.rows(), 1.0);
  SwiptGpBuilder builder(amplitudes, rect, noise, 1.0, 0.0, {});
  return builder.zdc();
}

OptimizedDesign algorithm1(const FrequencyResponse& channel, const RectennaParams& rect,
                           const NoiseProfile& noise, const PowerBudget& budget,
                           const OptimizationConfig& config,
                           const std::optional<AnchorPoint>& warm_start) {
  BuilderOptions opts;
  opts.with_wpt = !config.wit_only;
  opts.with_wit = true;
  opts.fixed_rho = config.freeze_rho;
  return run_condensation(channel, rect, noise, budget, config, opts, warm_start);
}

OptimizedDesign wpt_only(const FrequencyResponse& channel, const RectennaParams& rect,
                         const PowerBudget& budget, const OptimizationConfig& config) {
  BuilderOptions opts;
  opts.with_wpt = true;
  opts.with_wit = false;
  opts.fixed_rho = config.freeze_rho ? config.freeze_rho : std::optional<double>(1.0);
  OptimizationConfig effective = config;
  effective.rate_floor_bits = 0.0;
  // Noise plays no role without the information waveform.
  const NoiseProfile unused = NoiseProfile::uniform(channel.num_tones(), 1.0);
  return run_condensation(channel, rect, unused, budget, effective, opts, std::nullopt);
}

std::vector<double> default_rate_grid(const FrequencyResponse& channel, const NoiseProfile& noise,
                                      const PowerBudget& budget, int num_points) {
  if (num_points < 1) throw DomainError("need at least one grid point");
  const double cap = max_rate_bits(channel.amplitudes(), noise, budget.p_watt, 1.0);
  std::vector<double> grid(num_points);
  for (int i = 0; i < num_points; ++i)
    grid[i] = num_points == 1 ? 0.0 : cap * static_cast<double>(i) / (num_points - 1);
  return grid;
}

std::vector<RateEnergyPoint> sweep_region(const FrequencyResponse& channel,
                                          const RectennaParams& rect, const NoiseProfile& noise,
                                          const PowerBudget& budget,
                                          const std::vector<double>& rate_grid_bits,
                                          const OptimizationConfig& config) {
  config.validate();
  const double cap = max_rate_bits(channel.amplitudes(), noise, budget.p_watt,
                                   config.freeze_rho ? 1.0 - *config.freeze_rho : 1.0);

  // Highest floor first: each relaxation can then warm-start from a point
  // that is feasible for it.
  std::vector<size_t> order(rate_grid_bits.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return rate_grid_bits[a] > rate_grid_bits[b]; });

  auto solve_point = [&](double floor,
                         const std::optional<AnchorPoint>& warm) -> std::pair<RateEnergyPoint,
                                                                              std::optional<AnchorPoint>> {
    RateEnergyPoint point;
    try {
      OptimizedDesign od;
      if (floor <= 0.0 && !config.wit_only) {
        od = wpt_only(channel, rect, budget, config);
      } else {
        OptimizationConfig point_config = config;
        point_config.rate_floor_bits = floor;
        od = algorithm1(channel, rect, noise, budget, point_config, warm);
        if (warm) {
          // The warm start can trap the condensation on the branch the
          // previous point lived on (anchors near the amplitude floor never
          // grow back); the default initializer explores the other branch.
          const OptimizedDesign fresh =
              algorithm1(channel, rect, noise, budget, point_config, std::nullopt);
          if (fresh.zdc > od.zdc) od = fresh;
        }
      }
      point.rate_bits = od.rate_bits;
      point.zdc = od.zdc;
      point.rho = od.design.rho;
      point.iterations = od.iterations;
      point.status = od.status;
      AnchorPoint next{od.design.s_p, od.design.s_i, od.design.rho, od.rho_bar};
      return {point, next};
    } catch (const Error&) {
      point.rate_bits = floor;
      point.status = RunStatus::infeasible;
      return {point, std::nullopt};
    }
  };

  std::vector<RateEnergyPoint> points(rate_grid_bits.size());
  if (config.independent_points) {
    std::vector<std::future<std::pair<RateEnergyPoint, std::optional<AnchorPoint>>>> futures;
    futures.reserve(order.size());
    for (size_t idx : order)
      futures.push_back(std::async(std::launch::async, solve_point, rate_grid_bits[idx],
                                   std::nullopt));
    for (size_t k = 0; k < order.size(); ++k) points[order[k]] = futures[k].get().first;
  } else {
    std::optional<AnchorPoint> warm;
    for (size_t idx : order) {
      const double floor = rate_grid_bits[idx];
      // A floor at or above the cap is served by the water-filling endpoint;
      // warm starts only chain through the condensation runs.
      auto [point, next] = solve_point(floor, warm);
      points[idx] = point;
      if (next && floor < cap * (1.0 - 1e-9) && floor > 0.0) warm = next;
    }
  }

  std::sort(points.begin(), points.end(),
            [](const RateEnergyPoint& a, const RateEnergyPoint& b) {
              return a.rate_bits < b.rate_bits;
            });
  return points;
}

std::optional<BruteForceResult> brute_force(const FrequencyResponse& channel,
                                            const RectennaParams& rect, const NoiseProfile& noise,
                                            const PowerBudget& budget, double rate_floor_bits,
                                            double grid_resolution) {
  budget.validate();
  rect.validate();
  if (!(grid_resolution > 0.0 && grid_resolution < 0.5))
    throw DomainError("grid resolution must lie in (0, 0.5)");
  const int n = channel.num_tones(), m = channel.num_antennas();
  noise.validate(n);
  const Matrix& a = channel.amplitudes();

  const int granularity = static_cast<int>(std::lround(1.0 / grid_resolution));
  std::vector<double> rho_grid;
  for (int i = 1; i < granularity; ++i) rho_grid.push_back(static_cast<double>(i) / granularity);

  const int cells = 2 * n * m;
  std::vector<int> units(cells, 0);
  const double symbol_power = 2.0 * budget.p_watt;

  Matrix s_p(n, m), s_i(n, m);
  double best_z = -1.0;
  BruteForceResult best;

  // Enumerates every split of `granularity` power units across the cells.
  auto visit = [&](auto&& self, int cell, int remaining) -> void {
    if (cell == cells - 1) {
      units[cell] = remaining;
      for (int nm = 0; nm < n * m; ++nm) {
        s_p.data()[nm] = std::sqrt(symbol_power * units[nm] / static_cast<double>(granularity));
        s_i.data()[nm] =
            std::sqrt(symbol_power * units[n * m + nm] / static_cast<double>(granularity));
      }
      // The DC proxy rises with rho while the rate falls, so the best grid
      // rho for this split is the largest one still meeting the floor.
      int lo = 0, hi = static_cast<int>(rho_grid.size()) - 1, pick = -1;
      while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (rate(s_i, rho_grid[mid], a, noise) >= rate_floor_bits * (1.0 - 1e-12)) {
          pick = mid;
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      if (pick < 0) return;
      const double rho = rho_grid[pick];
      const double z = zdc_matched(s_p, s_i, rho, a, rect);
      if (z > best_z) {
        best_z = z;
        best.design.s_p = s_p;
        best.design.s_i = s_i;
        best.design.rho = rho;
        best.zdc = z;
        best.rate_bits = rate(s_i, rho, a, noise);
      }
      return;
    }
    for (int u = 0; u <= remaining; ++u) {
      units[cell] = u;
      self(self, cell + 1, remaining - u);
    }
  };
  visit(visit, 0, granularity);

  if (best_z < 0.0) return std::nullopt;
  auto [phi_p, phi_i] = matched_phases(channel);
  best.design.phi_p = std::move(phi_p);
  best.design.phi_i = std::move(phi_i);
  return best;
}

}  // namespace swipt
