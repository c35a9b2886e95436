// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace swipt {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file is malformed or violates an invariant. Carries the
/// offending field name when known.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Matrix or vector shapes do not match the scenario dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Sampling/propagation window cannot represent the requested signal.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point or weights outside the positive domain required by the
/// posynomial machinery.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested rate floor exceeds the maximum achievable rate.
class InfeasibleRateError : public Error {
 public:
  InfeasibleRateError(double requested_bits, double max_rate_bits)
      : Error("rate floor " + std::to_string(requested_bits) +
              " bits exceeds the maximum achievable rate " + std::to_string(max_rate_bits) +
              " bits"),
        requested_bits_(requested_bits),
        max_rate_bits_(max_rate_bits) {}
  double requested_bits() const { return requested_bits_; }
  double max_rate_bits() const { return max_rate_bits_; }

 private:
  double requested_bits_;
  double max_rate_bits_;
};

}  // namespace swipt
