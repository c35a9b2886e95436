// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "linalg.hpp"
#include "swiptwave/gp.hpp"

namespace swipt::gp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One affine row a . y + b with a kept sparse; bound rows have a single
// entry, posynomial terms a handful.
struct Row {
  std::vector<std::pair<int, double>> a;
  double b = 0.0;

  double value(const std::vector<double>& y) const {
    double v = b;
    for (const auto& [i, c] : a) v += c * y[i];
    return v;
  }
};

// log-sum-exp over rows. Single-row blocks are affine: zero curvature.
struct Block {
  std::vector<Row> rows;
  std::vector<int> support;  // sorted union of row variable indices
  std::vector<double> weights;  // scratch softmax weights

  void finalize() {
    support.clear();
    for (const auto& r : rows)
      for (const auto& [i, c] : r.a) support.push_back(i);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    weights.resize(rows.size());
  }

  double value(const std::vector<double>& y) const {
    if (rows.size() == 1) return rows[0].value(y);
    double hi = -kInf;
    for (const auto& r : rows) hi = std::max(hi, r.value(y));
    double s = 0.0;
    for (const auto& r : rows) s += std::exp(r.value(y) - hi);
    return hi + std::log(s);
  }

  // Value and gradient (gradient written sparsely into the dense buffer,
  // support entries only). Softmax weights stay cached for the Hessian.
  double eval(const std::vector<double>& y, std::vector<double>& grad_dense) {
    for (int i : support) grad_dense[i] = 0.0;
    if (rows.size() == 1) {
      for (const auto& [i, c] : rows[0].a) grad_dense[i] = c;
      weights[0] = 1.0;
      return rows[0].value(y);
    }
    double hi = -kInf;
    for (size_t k = 0; k < rows.size(); ++k) {
      weights[k] = rows[k].value(y);
      hi = std::max(hi, weights[k]);
    }
    double total = 0.0;
    for (double& w : weights) {
      w = std::exp(w - hi);
      total += w;
    }
    for (double& w : weights) w /= total;
    for (size_t k = 0; k < rows.size(); ++k)
      for (const auto& [i, c] : rows[k].a) grad_dense[i] += weights[k] * c;
    return hi + std::log(total);
  }

  // Adds scale * (curvature of the block) to the dense Hessian, using the
  // cached softmax weights and gradient. Affine blocks contribute nothing.
  void add_curvature(std::vector<double>& hess, int n, double scale,
                     const std::vector<double>& grad_dense) const {
    if (rows.size() == 1) return;
    for (size_t k = 0; k < rows.size(); ++k) {
      const double p = scale * weights[k];
      if (p == 0.0) continue;
      for (const auto& [i, ci] : rows[k].a)
        for (const auto& [j, cj] : rows[k].a)
          if (j <= i) hess[static_cast<size_t>(i) * n + j] += p * ci * cj;
    }
    for (int i : support)
      for (int j : support)
        if (j <= i)
          hess[static_cast<size_t>(i) * n + j] -= scale * grad_dense[i] * grad_dense[j];
  }
};

Block block_from(const Posynomial& p) {
  Block blk;
  blk.rows.reserve(p.size());
  for (const auto& term : p.terms()) {
    Row row;
    row.b = term.log_coeff();
    for (const auto& [v, e] : term.exponents()) row.a.push_back({v, e});
    blk.rows.push_back(std::move(row));
  }
  blk.finalize();
  return blk;
}

Block single_row(std::vector<std::pair<int, double>> a, double b) {
  Block blk;
  blk.rows.push_back(Row{std::move(a), b});
  blk.finalize();
  return blk;
}

struct LogProgram {
  int n = 0;
  Block objective;
  std::vector<Block> constraints;
  std::vector<std::vector<double>> eq_a;  // dense equality rows, a . y + b = 0
  std::vector<double> eq_b;
};

double barrier_value(const LogProgram& prog, double t, const std::vector<double>& y) {
  double f = t * prog.objective.value(y);
  for (const auto& c : prog.constraints) {
    const double v = c.value(y);
    if (v >= 0.0 || !std::isfinite(v)) return kInf;
    f -= std::log(-v);
  }
  return f;
}

std::vector<double> project_out_equalities(const LogProgram& prog, std::vector<double> g) {
  const size_t m = prog.eq_a.size();
  if (m == 0) return g;
  const size_t n = g.size();
  std::vector<double> gram(m * m, 0.0), rhs(m, 0.0);
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c <= r; ++c) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += prog.eq_a[r][i] * prog.eq_a[c][i];
      gram[r * m + c] = gram[c * m + r] = s;
    }
    for (size_t i = 0; i < n; ++i) rhs[r] += prog.eq_a[r][i] * g[i];
  }
  std::vector<double> mult;
  if (!detail::lu_solve(gram, static_cast<int>(m), rhs, mult)) return g;
  for (size_t r = 0; r < m; ++r)
    for (size_t i = 0; i < n; ++i) g[i] -= mult[r] * prog.eq_a[r][i];
  return g;
}

void project_onto_equalities(const LogProgram& prog, std::vector<double>& y) {
  const size_t m = prog.eq_a.size();
  if (m == 0) return;
  const size_t n = y.size();
  std::vector<double> gram(m * m, 0.0), resid(m, 0.0);
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c <= r; ++c) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += prog.eq_a[r][i] * prog.eq_a[c][i];
      gram[r * m + c] = gram[c * m + r] = s;
    }
    resid[r] = prog.eq_b[r];
    for (size_t i = 0; i < n; ++i) resid[r] += prog.eq_a[r][i] * y[i];
  }
  std::vector<double> mult;
  if (!detail::lu_solve(gram, static_cast<int>(m), resid, mult)) return;
  for (size_t r = 0; r < m; ++r)
    for (size_t i = 0; i < n; ++i) y[i] -= mult[r] * prog.eq_a[r][i];
}

struct CenterOutcome {
  bool converged = false;
  int steps = 0;
  double decrement_sq = 0.0;  // squared Newton decrement at exit
};

// Damped Newton on t*f0 + barrier. Stays strictly feasible and on the
// equality manifold; falls back to projected gradient descent when the
// Newton system fails or stops descending.
CenterOutcome center(LogProgram& prog, double t, std::vector<double>& y, int budget,
                     double decrement_tol,
                     const std::function<bool(const std::vector<double>&)>& early_stop) {
  const size_t n = y.size();
  const size_t m_eq = prog.eq_a.size();
  CenterOutcome out;

  std::vector<double> grad(n), hess(n * n), block_grad(n, 0.0);
  for (; out.steps < budget; ++out.steps) {
    if (early_stop && early_stop(y)) {
      out.converged = true;
      return out;
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);

    prog.objective.eval(y, block_grad);
    for (int i : prog.objective.support) grad[i] += t * block_grad[i];
    prog.objective.add_curvature(hess, static_cast<int>(n), t, block_grad);

    bool interior = true;
    for (auto& con : prog.constraints) {
      const double cv = con.eval(y, block_grad);
      if (cv >= 0.0) {
        interior = false;
        break;
      }
      const double inv = 1.0 / (-cv);
      for (int i : con.support) grad[i] += inv * block_grad[i];
      con.add_curvature(hess, static_cast<int>(n), inv, block_grad);
      for (int i : con.support)
        for (int j : con.support)
          if (j <= i)
            hess[static_cast<size_t>(i) * n + j] +=
                inv * inv * block_grad[i] * block_grad[j];
    }
    if (!interior) break;  // line search guards this; defensive only
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        hess[i * n + j] = hess[j * n + i];

    std::vector<double> dir;
    bool have_dir = false;
    if (m_eq == 0) {
      std::vector<double> rhs(n);
      for (size_t i = 0; i < n; ++i) rhs[i] = -grad[i];
      double ridge = 0.0;
      for (int attempt = 0; attempt < 8 && !have_dir; ++attempt) {
        have_dir = detail::cholesky_solve(hess, static_cast<int>(n), rhs, dir, ridge);
        ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
      }
    } else {
      const size_t dim = n + m_eq;
      std::vector<double> kkt(dim * dim, 0.0), rhs(dim, 0.0);
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) kkt[i * dim + j] = hess[i * n + j];
        rhs[i] = -grad[i];
      }
      for (size_t r = 0; r < m_eq; ++r)
        for (size_t i = 0; i < n; ++i) {
          kkt[(n + r) * dim + i] = prog.eq_a[r][i];
          kkt[i * dim + (n + r)] = prog.eq_a[r][i];
        }
      std::vector<double> sol;
      have_dir = detail::lu_solve(kkt, static_cast<int>(dim), rhs, sol);
      if (have_dir) dir.assign(sol.begin(), sol.begin() + n);
    }

    double slope = 0.0;
    if (have_dir)
      for (size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
    if (!have_dir || !(slope < 0.0)) {
      dir = project_out_equalities(prog, grad);
      for (auto& d : dir) d = -d;
      slope = 0.0;
      for (size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
      if (!(slope < 0.0)) {
        out.converged = true;  // stationary to numerical precision
        out.decrement_sq = 0.0;
        return out;
      }
    }

    out.decrement_sq = -slope;
    if (-slope * 0.5 < decrement_tol) {
      out.converged = true;
      return out;
    }

    const double f0 = barrier_value(prog, t, y);
    double alpha = 1.0;
    std::vector<double> trial(n);
    bool stepped = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (size_t i = 0; i < n; ++i) trial[i] = y[i] + alpha * dir[i];
      const double f1 = barrier_value(prog, t, trial);
      if (std::isfinite(f1) && f1 <= f0 + 1e-4 * alpha * slope) {
        y = trial;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      out.converged = true;  // step collapsed, accept current point
      return out;
    }
  }
  return out;
}

}  // namespace

GpSolution solve_gp(const GpProblem& problem, std::span<const double> initial,
                    const GpSolverOptions& options) {
  problem.validate();
  const int n = problem.vars.size();
  if (static_cast<int>(initial.size()) != n)
    throw DomainError("initial point size does not match the variable count");
  for (double v : initial)
    if (!(v > 0.0)) throw DomainError("initial point must be strictly positive");

  const double lo = std::log(options.variable_floor);
  const double hi = std::log(options.variable_ceiling);

  LogProgram prog;
  prog.n = n;
  prog.objective = block_from(problem.objective);
  for (const auto& c : problem.inequalities) prog.constraints.push_back(block_from(c));
  // Implicit positivity bounds keep every centering problem bounded.
  for (int i = 0; i < n; ++i) {
    prog.constraints.push_back(single_row({{i, -1.0}}, lo));
    prog.constraints.push_back(single_row({{i, 1.0}}, -hi));
  }
  const size_t num_user_constraints = problem.inequalities.size();
  for (const auto& e : problem.equalities) {
    std::vector<double> row(n, 0.0);
    for (const auto& [v, exp_v] : e.exponents()) row[v] = exp_v;
    prog.eq_a.push_back(std::move(row));
    prog.eq_b.push_back(e.log_coeff());
  }

  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = std::clamp(std::log(initial[i]), lo + 1e-6, hi - 1e-6);
  project_onto_equalities(prog, y);
  for (int i = 0; i < n; ++i) y[i] = std::clamp(y[i], lo + 1e-9, hi - 1e-9);

  GpSolution solution;
  solution.status = GpStatus::max_iterations;
  int budget = options.max_iterations;
  const int per_centering_cap = 60;

  auto worst = [&](const std::vector<double>& point) {
    double w = -kInf;
    for (const auto& c : prog.constraints) w = std::max(w, c.value(point));
    return w;
  };

  if (worst(y) >= -1e-10) {
    // Feasibility phase: minimize the common slack s over f_i(y) <= s.
    LogProgram phase1;
    phase1.n = n + 1;
    phase1.objective = single_row({{n, 1.0}}, 0.0);
    for (const auto& c : prog.constraints) {
      Block shifted = c;
      for (auto& row : shifted.rows) row.a.push_back({n, -1.0});
      shifted.finalize();
      phase1.constraints.push_back(std::move(shifted));
    }
    for (const auto& row : prog.eq_a) {
      std::vector<double> ext = row;
      ext.push_back(0.0);
      phase1.eq_a.push_back(std::move(ext));
    }
    phase1.eq_b = prog.eq_b;

    std::vector<double> z = y;
    z.push_back(worst(y) + 1.0);
    auto feasible_enough = [n](const std::vector<double>& point) { return point[n] < -1e-7; };
    double t = 1.0;
    const double m_count = static_cast<double>(phase1.constraints.size());
    while (budget > 0) {
      const double dec_tol = std::clamp(0.05 * 1e-10 * t, 1e-12, 0.05);
      const CenterOutcome res = center(phase1, t, z, std::min(budget, per_centering_cap),
                                       dec_tol, feasible_enough);
      budget -= res.steps;
      solution.newton_iterations += res.steps;
      if (feasible_enough(z)) break;
      if (m_count / t <= 1e-10) break;
      t *= 20.0;
    }
    std::vector<double> y_only(z.begin(), z.begin() + n);
    if (z[n] >= 0.0 || worst(y_only) >= 0.0) {
      solution.status = GpStatus::infeasible;
      solution.values.resize(n);
      for (int i = 0; i < n; ++i) solution.values[i] = std::exp(z[i]);
      solution.objective_value = problem.objective.evaluate(solution.values);
      double viol = 0.0;
      for (size_t i = 0; i < num_user_constraints; ++i)
        viol = std::max(viol, std::exp(prog.constraints[i].value(y_only)) - 1.0);
      solution.max_violation = viol;
      solution.kkt_residual = kInf;
      return solution;
    }
    y = y_only;
  }

  // Main barrier loop.
  const double m_count = static_cast<double>(prog.constraints.size());
  const double gap_target = std::max(1e-12, std::min(options.tol * 1e-2, 1e-10));
  double t = 1.0;
  bool converged = false;
  double final_decrement_sq = kInf;
  while (budget > 0) {
    // The centering tolerance tracks the extra objective gap lambda^2/t a
    // loose center costs; tightening beyond that fights float cancellation
    // in the barrier gradient at large t for no benefit.
    const double dec_tol = std::clamp(0.05 * gap_target * t, 1e-12, 0.05);
    CenterOutcome res =
        center(prog, t, y, std::min(budget, per_centering_cap), dec_tol, nullptr);
    budget -= res.steps;
    solution.newton_iterations += res.steps;
    if (m_count / t <= gap_target) {
      if (!res.converged && budget > 0) {
        const CenterOutcome again =
            center(prog, t, y, std::min(budget, per_centering_cap), dec_tol, nullptr);
        budget -= again.steps;
        solution.newton_iterations += again.steps;
        res = again;
      }
      converged = res.converged;
      final_decrement_sq = res.decrement_sq;
      break;
    }
    t *= 20.0;
  }

  solution.values.resize(n);
  for (int i = 0; i < n; ++i) solution.values[i] = std::exp(y[i]);
  solution.objective_value = problem.objective.evaluate(solution.values);

  // Log-domain optimality certificate: the barrier duality-gap bound m/t
  // plus the final Newton decrement (stationarity on the central path) and
  // any equality residual.
  double r_eq = 0.0;
  for (size_t r = 0; r < prog.eq_a.size(); ++r) {
    double v = prog.eq_b[r];
    for (int i = 0; i < n; ++i) v += prog.eq_a[r][i] * y[i];
    r_eq = std::max(r_eq, std::abs(v));
  }
  solution.kkt_residual = (m_count + std::min(final_decrement_sq, 1.0)) / t + r_eq;

  double viol = 0.0;
  for (size_t i = 0; i < num_user_constraints; ++i)
    viol = std::max(viol, std::exp(prog.constraints[i].value(y)) - 1.0);
  solution.max_violation = std::max(viol, 0.0);

  solution.status = (converged && solution.kkt_residual <= options.tol &&
                     solution.max_violation <= options.constraint_tol)
                        ? GpStatus::optimal
                        : GpStatus::max_iterations;
  return solution;
}

}  // namespace swipt::gp
