#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bkrisk {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result not representable as a finite value (e.g. an infinite density).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// An iterative kernel ran out of budget. Carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, long iterations,
                   std::optional<std::pair<double, double>> bracket = std::nullopt)
      : std::runtime_error(what),
        estimate_(estimate),
        iterations_(iterations),
        bracket_(bracket) {}

  double estimate() const noexcept { return estimate_; }
  long iterations() const noexcept { return iterations_; }
  const std::optional<std::pair<double, double>>& bracket() const noexcept { return bracket_; }

 private:
  double estimate_;
  long iterations_;
  std::optional<std::pair<double, double>> bracket_;
};

/// Two independent evaluation routes disagreed. Signals a kernel bug, not bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Sample moments admit no positive shape pair (variance >= mean(1-mean) or <= 0).
class InfeasibleMomentsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Newton-Raphson could not produce an admissible step.
class StepFailureError : public std::runtime_error {
 public:
  StepFailureError(const std::string& what, double a, double b)
      : std::runtime_error(what), a_(a), b_(b) {}

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  double a_;
  double b_;
};

}  // namespace bkrisk
