#pragma once

// Special-function kernel: log-gamma, polygamma, the Gauss hypergeometric
// series, the regularized incomplete beta function and the normal quantile.
// All functions are pure; none touch global mutable state.

namespace bkrisk::specfun {

/// Evaluation budget shared by the series and continued-fraction kernels.
struct EvalTolerances {
  double series_rel_tol = 1e-15;
  int max_series_terms = 10'000;
  int cf_max_iters = 500;

  /// Throws DomainError unless 0 < series_rel_tol < 1e-6 and both budgets are >= 200.
  void validate() const;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double ln_beta(double a, double b);

double digamma(double x);
double trigamma(double x);

struct SeriesSum {
  double value;
  int terms;
};

/// Gauss hypergeometric series 2F1(m, n; p; x) with the number of summed terms.
///
/// Supported: |x| < 1, x == 1 with p - m - n > 0, or any finite x when m or n
/// is a non-positive integer -q (then exactly q + 1 terms are summed). A
/// non-positive integer p is accepted only if the series terminates before
/// the zero denominator is reached.
SeriesSum gauss_2f1_sum(double m, double n, double p, double x, const EvalTolerances& tol = {});

double gauss_2f1(double m, double n, double p, double x, const EvalTolerances& tol = {});

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x, const EvalTolerances& tol = {});

/// 1 - I_x(a, b), computed without cancellation.
double reg_inc_beta_complement(double a, double b, double x, const EvalTolerances& tol = {});

double std_normal_pdf(double z);
double std_normal_cdf(double z);

/// Phi^{-1}(alpha) for alpha in (0, 1).
double std_normal_quantile(double alpha);

}  // namespace bkrisk::specfun
