#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <span>

#include "bkrisk/distribution.hpp"

namespace bkrisk::estimation {

/// Sufficient statistics of a sample on (0, 1).
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divisor n - 1
  double sum_log_x = 0.0;
  double sum_log_1mx = 0.0;
};

struct FitResult {
  BetaKotzParams params;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;  // max |score| / n
};

inline constexpr double kDefaultGradTol = 1e-10;
inline constexpr int kDefaultMaxIters = 100;

/// Single pass over the sample. Throws DomainError naming the first index
/// outside (0, 1), or if fewer than two values are given.
SampleStats stats_from_samples(std::span<const double> xs);

/// Method-of-moments shapes; InfeasibleMomentsError unless 0 < variance < mean (1 - mean).
BetaKotzParams fit_moments(const SampleStats& stats);

/// n ln Gamma(a+b) - n ln Gamma(a) - n ln Gamma(b) + (a-1) sum ln x + (b-1) sum ln(1-x).
double log_likelihood(const BetaKotzParams& p, const SampleStats& stats);

/// Score vector (dL/da, dL/db).
std::pair<double, double> score(const BetaKotzParams& p, const SampleStats& stats);

/// Newton-Raphson on the score with trigamma Hessian and step halving.
///
/// Starts from `init`, else from fit_moments, else from (1, 1). A step is
/// halved (at most 30 times) while it leaves (0, inf)^2 or lowers the
/// likelihood; exhausting the halvings or meeting a singular Hessian throws
/// StepFailureError. Running out of iterations is not an error: the result
/// comes back with converged = false.
FitResult fit_mle(const SampleStats& stats, std::optional<BetaKotzParams> init = std::nullopt,
                  double grad_tol = kDefaultGradTol, int max_iters = kDefaultMaxIters);

}  // namespace bkrisk::estimation
