// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swiptwave/errors.hpp"

namespace swipt::gp {

using VarId = int;

/// Name registry for problem variables. Ids are dense indices into the
/// evaluation point vector.
class VarTable {
 public:
  VarId add(std::string name);
  const std::string& name(VarId id) const { return names_[id]; }
  int size() const { return static_cast<int>(names_.size()); }

 private:
  std::vector<std::string> names_;
};

/// c * prod_i x_i^{a_i} with c > 0. The coefficient is kept in log form;
/// the harvester coefficients span twenty orders of magnitude and products
/// of them underflow in linear form.
class Monomial {
 public:
  Monomial() = default;

  static Monomial constant(double c);
  static Monomial from_log_coeff(double log_c);
  static Monomial variable(VarId id, double exponent = 1.0);

  double coeff() const;
  double log_coeff() const { return log_coeff_; }
  double exponent_of(VarId id) const;
  const std::vector<std::pair<VarId, double>>& exponents() const { return exponents_; }

  Monomial& scale(double c);
  Monomial times(const Monomial& other) const;
  Monomial pow(double e) const;

  /// Value at a strictly positive point (indexed by VarId).
  double evaluate(std::span<const double> point) const;
  /// log value at a point given in log coordinates.
  double log_evaluate(std::span<const double> log_point) const;

  VarId max_var() const;

 private:
  double log_coeff_ = 0.0;
  std::vector<std::pair<VarId, double>> exponents_;  // sorted by id, no zeros

  void set_exponent(VarId id, double e);
};

/// Sum of monomials. Terms are kept exactly as supplied; addition and
/// multiplication do not combine like terms, so term indices stay stable
/// for weight bookkeeping. merged() combines like terms explicitly.
class Posynomial {
 public:
  Posynomial() = default;
  Posynomial(Monomial m) : terms_{std::move(m)} {}

  const std::vector<Monomial>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Posynomial& operator+=(const Monomial& m);
  Posynomial& operator+=(const Posynomial& p);

  double evaluate(std::span<const double> point) const;
  double log_evaluate(std::span<const double> log_point) const;

  /// Combines terms with identical exponent vectors (coefficients add).
  Posynomial merged() const;

  VarId max_var() const;

 private:
  std::vector<Monomial> terms_;
};

Posynomial operator+(Posynomial a, const Posynomial& b);
Posynomial operator*(const Posynomial& a, const Posynomial& b);
Posynomial operator*(const Monomial& a, const Posynomial& b);

/// Normalized term weights g_k(point) / p(point); they sum to one.
std::vector<double> weights_from_point(const Posynomial& p, std::span<const double> point);

/// Weighted geometric-mean lower bound prod_k (g_k / gamma_k)^{gamma_k}.
/// Zero-weight terms drop out of the product. Equality with p holds exactly
/// at any point whose weights_from_point match gamma.
Monomial condense(const Posynomial& p, std::span<const double> gamma);

struct GpProblem {
  VarTable vars;
  Posynomial objective;                   // minimized
  std::vector<Posynomial> inequalities;   // each <= 1
  std::vector<Monomial> equalities;       // each == 1

  void validate() const;
  /// Human-readable listing of every monomial (coefficient and exponent
  /// vector), for debugging and regression snapshots.
  std::string dump() const;
};

enum class GpStatus { optimal, max_iterations, infeasible };

const char* to_string(GpStatus status);

struct GpSolution {
  std::vector<double> values;      // linear scale, indexed by VarId
  double objective_value = 0.0;
  GpStatus status = GpStatus::infeasible;
  // Log-domain optimality certificate: duality-gap bound plus the final
  // Newton decrement and any equality residual.
  double kkt_residual = 0.0;
  int newton_iterations = 0;
  double max_violation = 0.0;      // worst constraint excess at the returned point
};

struct GpSolverOptions {
  double tol = 1e-8;               // stationarity target in log coordinates
  int max_iterations = 4000;       // Newton step budget across all centerings
  double constraint_tol = 1e-9;    // acceptable relative constraint excess
  double variable_floor = 1e-12;   // implicit positive bounds on every variable
  double variable_ceiling = 1e12;
};

/// Solves the problem through the log-coordinate convex transform with a
/// barrier interior-point method. The initial point must be strictly
/// positive but need not be feasible; a feasibility phase runs first when it
/// is not.
GpSolution solve_gp(const GpProblem& problem, std::span<const double> initial,
                    const GpSolverOptions& options = {});

}  // namespace swipt::gp
