// SPDX-License-Identifier: Apache-2.0
#include "swiptwave/gp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace swipt::gp {

namespace {
constexpr double kExponentEps = 1e-15;
}

VarId VarTable::add(std::string name) {
  for (const auto& existing : names_)
    if (existing == name) throw DomainError("duplicate variable name: " + name);
  names_.push_back(std::move(name));
  return static_cast<VarId>(names_.size()) - 1;
}

Monomial Monomial::constant(double c) {
  if (!(c > 0.0)) throw DomainError("monomial coefficients must be positive");
  Monomial m;
  m.log_coeff_ = std::log(c);
  return m;
}

Monomial Monomial::from_log_coeff(double log_c) {
  Monomial m;
  m.log_coeff_ = log_c;
  return m;
}

Monomial Monomial::variable(VarId id, double exponent) {
  if (id < 0) throw DomainError("variable ids must be nonnegative");
  Monomial m;
  m.set_exponent(id, exponent);
  return m;
}

double Monomial::coeff() const { return std::exp(log_coeff_); }

double Monomial::exponent_of(VarId id) const {
  for (const auto& [v, e] : exponents_)
    if (v == id) return e;
  return 0.0;
}

void Monomial::set_exponent(VarId id, double e) {
  if (std::abs(e) < kExponentEps) return;
  auto it = std::lower_bound(exponents_.begin(), exponents_.end(), id,
                             [](const auto& p, VarId v) { return p.first < v; });
  exponents_.insert(it, {id, e});
}

Monomial& Monomial::scale(double c) {
  if (!(c > 0.0)) throw DomainError("monomial coefficients must be positive");
  log_coeff_ += std::log(c);
  return *this;
}

Monomial Monomial::times(const Monomial& other) const {
  Monomial out;
  out.log_coeff_ = log_coeff_ + other.log_coeff_;
  size_t i = 0, j = 0;
  while (i < exponents_.size() || j < other.exponents_.size()) {
    if (j == other.exponents_.size() ||
        (i < exponents_.size() && exponents_[i].first < other.exponents_[j].first)) {
      out.exponents_.push_back(exponents_[i++]);
    } else if (i == exponents_.size() || other.exponents_[j].first < exponents_[i].first) {
      out.exponents_.push_back(other.exponents_[j++]);
    } else {
      const double e = exponents_[i].second + other.exponents_[j].second;
      if (std::abs(e) >= kExponentEps) out.exponents_.push_back({exponents_[i].first, e});
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial Monomial::pow(double e) const {
  Monomial out;
  out.log_coeff_ = log_coeff_ * e;
  if (std::abs(e) >= kExponentEps) {
    out.exponents_ = exponents_;
    for (auto& [v, exp_v] : out.exponents_) exp_v *= e;
  }
  return out;
}

double Monomial::evaluate(std::span<const double> point) const {
  return std::exp(log_coeff_ + [&] {
    double acc = 0.0;
    for (const auto& [v, e] : exponents_) {
      if (v >= static_cast<VarId>(point.size())) throw DomainError("evaluation point too short");
      if (!(point[v] > 0.0)) throw DomainError("evaluation points must be strictly positive");
      acc += e * std::log(point[v]);
    }
    return acc;
  }());
}

double Monomial::log_evaluate(std::span<const double> log_point) const {
  double acc = log_coeff_;
  for (const auto& [v, e] : exponents_) {
    if (v >= static_cast<VarId>(log_point.size())) throw DomainError("evaluation point too short");
    acc += e * log_point[v];
  }
  return acc;
}

VarId Monomial::max_var() const {
  return exponents_.empty() ? -1 : exponents_.back().first;
}

Posynomial& Posynomial::operator+=(const Monomial& m) {
  terms_.push_back(m);
  return *this;
}

Posynomial& Posynomial::operator+=(const Posynomial& p) {
  terms_.insert(terms_.end(), p.terms_.begin(), p.terms_.end());
  return *this;
}

double Posynomial::evaluate(std::span<const double> point) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.evaluate(point);
  return acc;
}

double Posynomial::log_evaluate(std::span<const double> log_point) const {
  if (terms_.empty()) throw DomainError("posynomial has no terms");
  double max_log = -1e300;
  std::vector<double> logs(terms_.size());
  for (size_t k = 0; k < terms_.size(); ++k) {
    logs[k] = terms_[k].log_evaluate(log_point);
    max_log = std::max(max_log, logs[k]);
  }
  double acc = 0.0;
  for (double lv : logs) acc += std::exp(lv - max_log);
  return max_log + std::log(acc);
}

Posynomial Posynomial::merged() const {
  std::map<std::vector<std::pair<VarId, double>>, double> by_exponents;  // -> log coeff via LSE
  for (const auto& t : terms_) {
    auto [it, inserted] = by_exponents.try_emplace(t.exponents(), t.log_coeff());
    if (!inserted) {
      const double a = it->second, b = t.log_coeff();
      const double hi = std::max(a, b);
      it->second = hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    }
  }
  Posynomial out;
  for (const auto& [exps, log_c] : by_exponents) {
    Monomial m = Monomial::from_log_coeff(log_c);
    for (const auto& [v, e] : exps) m = m.times(Monomial::variable(v, e));
    out += m;
  }
  return out;
}

VarId Posynomial::max_var() const {
  VarId top = -1;
  for (const auto& t : terms_) top = std::max(top, t.max_var());
  return top;
}

Posynomial operator+(Posynomial a, const Posynomial& b) {
  a += b;
  return a;
}

Posynomial operator*(const Posynomial& a, const Posynomial& b) {
  if (a.empty() || b.empty()) throw DomainError("cannot multiply an empty posynomial");
  Posynomial out;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out += ta.times(tb);
  return out;
}

Posynomial operator*(const Monomial& a, const Posynomial& b) { return Posynomial(a) * b; }

std::vector<double> weights_from_point(const Posynomial& p, std::span<const double> point) {
  if (p.empty()) throw DomainError("posynomial has no terms");
  std::vector<double> log_point(point.size());
  for (size_t i = 0; i < point.size(); ++i) {
    if (!(point[i] > 0.0)) throw DomainError("evaluation points must be strictly positive");
    log_point[i] = std::log(point[i]);
  }
  std::vector<double> logs(p.size());
  double max_log = -1e300;
  for (size_t k = 0; k < p.size(); ++k) {
    logs[k] = p.terms()[k].log_evaluate(log_point);
    max_log = std::max(max_log, logs[k]);
  }
  double total = 0.0;
  for (double lv : logs) total += std::exp(lv - max_log);
  std::vector<double> gamma(p.size());
  for (size_t k = 0; k < p.size(); ++k) gamma[k] = std::exp(logs[k] - max_log) / total;
  return gamma;
}

Monomial condense(const Posynomial& p, std::span<const double> gamma) {
  if (gamma.size() != p.size())
    throw DomainError("weight count does not match the posynomial term count");
  double sum = 0.0;
  for (double g : gamma) {
    if (g < 0.0) throw DomainError("condensation weights must be nonnegative");
    sum += g;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("condensation weights must sum to one");

  double log_coeff = 0.0;
  std::map<VarId, double> exps;
  for (size_t k = 0; k < p.size(); ++k) {
    const double g = gamma[k];
    if (g <= 0.0) continue;
    const Monomial& term = p.terms()[k];
    log_coeff += g * (term.log_coeff() - std::log(g));
    for (const auto& [v, e] : term.exponents()) exps[v] += g * e;
  }
  Monomial out = Monomial::from_log_coeff(log_coeff);
  for (const auto& [v, e] : exps) out = out.times(Monomial::variable(v, e));
  return out;
}

void GpProblem::validate() const {
  const int n = vars.size();
  auto check = [n](VarId top, const char* what) {
    if (top >= n) throw DomainError(std::string(what) + " references an undeclared variable");
  };
  if (objective.empty()) throw DomainError("objective has no terms");
  check(objective.max_var(), "objective");
  for (const auto& c : inequalities) {
    if (c.empty()) throw DomainError("constraint has no terms");
    check(c.max_var(), "constraint");
  }
  for (const auto& e : equalities) check(e.max_var(), "equality");
}

namespace {
void dump_monomial(std::ostringstream& out, const VarTable& vars, const Monomial& m) {
  out << m.coeff();
  for (const auto& [v, e] : m.exponents()) out << " * " << vars.name(v) << "^" << e;
}

void dump_posynomial(std::ostringstream& out, const VarTable& vars, const Posynomial& p) {
  for (size_t k = 0; k < p.size(); ++k) {
    out << "    [" << k << "] ";
    dump_monomial(out, vars, p.terms()[k]);
    out << "\n";
  }
}
}  // namespace

std::string GpProblem::dump() const {
  std::ostringstream out;
  out << "variables (" << vars.size() << "):";
  for (int i = 0; i < vars.size(); ++i) out << " " << vars.name(i);
  out << "\nminimize:\n";
  dump_posynomial(out, vars, objective);
  for (size_t i = 0; i < inequalities.size(); ++i) {
    out << "subject to (<= 1) #" << i << ":\n";
    dump_posynomial(out, vars, inequalities[i]);
  }
  for (size_t i = 0; i < equalities.size(); ++i) {
    out << "equality (= 1) #" << i << ":\n    ";
    dump_monomial(out, vars, equalities[i]);
    out << "\n";
  }
  return out.str();
}

const char* to_string(GpStatus status) {
  switch (status) {
    case GpStatus::optimal:
      return "optimal";
    case GpStatus::max_iterations:
      return "max-iterations";
    case GpStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

}  // namespace swipt::gp
