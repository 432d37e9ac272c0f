#pragma once

#include "bkrisk/specfun.hpp"

namespace bkrisk {

/// Parameters of two independent Kotz type I elliptical Wishart factors.
struct KotzGeneratorParams {
  double n1;  // degrees of freedom of the first factor
  double n2;
  double t1;  // Kotz shape of the first generator
  double t2;

  /// Throws DomainError naming the first failing condition.
  void validate() const;
};

/// Probability level for tail measures, strictly inside (0, 1).
class ConfidenceLevel {
 public:
  explicit ConfidenceLevel(double alpha);

  double value() const noexcept { return alpha_; }
  /// 1 - alpha.
  double tail() const noexcept { return 1.0 - alpha_; }

  friend bool operator==(const ConfidenceLevel&, const ConfidenceLevel&) = default;

 private:
  double alpha_;
};

/// Shape pair (a, b) of the Beta-Kotz law on [0, 1] and its log normalizing
/// constant ln Gamma(a+b) - ln Gamma(a) - ln Gamma(b).
class BetaKotzParams {
 public:
  BetaKotzParams(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double log_norm_const() const noexcept { return log_norm_const_; }

  friend bool operator==(const BetaKotzParams&, const BetaKotzParams&) = default;

 private:
  double a_;
  double b_;
  double log_norm_const_;
};

/// (a, b) = (t1 + n1/2 - 1, t2 + n2/2 - 1).
BetaKotzParams from_kotz(const KotzGeneratorParams& k);

/// Density on [0, 1]. Endpoint limits are returned when finite; an infinite
/// endpoint density raises RangeError.
double pdf(const BetaKotzParams& p, double x);

/// Density evaluated in log space for interior points; never throws for x in (0, 1).
double log_pdf_interior(const BetaKotzParams& p, double x);

double cdf(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol = {});

/// 1 - cdf, without cancellation in the upper tail.
double survival(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol = {});

/// The distribution function written as C x^a / a * 2F1(a, 1 - b; a + 1; x).
/// Independent of cdf(), which uses the continued fraction.
double cdf_hypergeometric(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol = {});

/// E[X^t] = Gamma(a+t) Gamma(a+b) / (Gamma(a+b+t) Gamma(a)).
double moment(const BetaKotzParams& p, double t);

double mean(const BetaKotzParams& p);
double variance(const BetaKotzParams& p);

}  // namespace bkrisk
