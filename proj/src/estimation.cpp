#include "bkrisk/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bkrisk/errors.hpp"
#include "bkrisk/summation.hpp"

namespace bkrisk::estimation {
namespace {

constexpr int kMaxHalvings = 30;

void require_usable(const SampleStats& s, const char* fn) {
  if (s.n < 2) throw DomainError(std::string(fn) + ": at least two observations are required");
  if (!(s.mean > 0.0 && s.mean < 1.0)) throw DomainError(std::string(fn) + ": sample mean must lie in (0, 1)");
  if (!std::isfinite(s.sum_log_x) || !std::isfinite(s.sum_log_1mx))
    throw DomainError(std::string(fn) + ": log sums must be finite");
}

double max_abs(std::pair<double, double> g) { return std::max(std::abs(g.first), std::abs(g.second)); }

}  // namespace

SampleStats stats_from_samples(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("stats_from_samples: at least two observations are required");
  // Welford for the first two moments, compensated sums for the logs.
  double mean = 0.0;
  double m2 = 0.0;
  CompensatedSum log_x;
  CompensatedSum log_1mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (!(x > 0.0 && x < 1.0))
      throw DomainError("stats_from_samples: observation " + std::to_string(i) + " lies outside (0, 1)");
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
    log_x.add(std::log(x));
    log_1mx.add(std::log1p(-x));
  }
  return SampleStats{xs.size(), mean, m2 / static_cast<double>(xs.size() - 1), log_x.value(), log_1mx.value()};
}

BetaKotzParams fit_moments(const SampleStats& s) {
  const double m = s.mean;
  if (!(m > 0.0 && m < 1.0)) throw InfeasibleMomentsError("fit_moments: mean must lie in (0, 1)");
  const double bound = m * (1.0 - m);
  if (!(s.variance > 0.0)) throw InfeasibleMomentsError("fit_moments: variance must be positive");
  if (!(s.variance < bound)) throw InfeasibleMomentsError("fit_moments: variance must be below mean * (1 - mean)");
  const double k = bound / s.variance - 1.0;
  return BetaKotzParams(m * k, (1.0 - m) * k);
}

double log_likelihood(const BetaKotzParams& p, const SampleStats& s) {
  const double n = static_cast<double>(s.n);
  return -n * specfun::ln_beta(p.a(), p.b()) + (p.a() - 1.0) * s.sum_log_x + (p.b() - 1.0) * s.sum_log_1mx;
}

std::pair<double, double> score(const BetaKotzParams& p, const SampleStats& s) {
  const double n = static_cast<double>(s.n);
  const double psi_ab = specfun::digamma(p.a() + p.b());
  return {n * (psi_ab - specfun::digamma(p.a())) + s.sum_log_x, n * (psi_ab - specfun::digamma(p.b())) + s.sum_log_1mx};
}

FitResult fit_mle(const SampleStats& stats, std::optional<BetaKotzParams> init, double grad_tol, int max_iters) {
  require_usable(stats, "fit_mle");
  if (!(grad_tol > 0.0)) throw DomainError("fit_mle: grad_tol must be positive");
  if (max_iters < 1) throw DomainError("fit_mle: max_iters must be positive");

  if (!init) {
    try {
      init = fit_moments(stats);
    } catch (const InfeasibleMomentsError&) {
      init = BetaKotzParams(1.0, 1.0);
    }
  }

  const double n = static_cast<double>(stats.n);
  double a = init->a();
  double b = init->b();
  double ll = log_likelihood(*init, stats);
  auto g = score(*init, stats);

  for (int iter = 0; iter < max_iters; ++iter) {
    const double gnorm = max_abs(g) / n;
    if (gnorm <= grad_tol) return FitResult{BetaKotzParams(a, b), iter, true, ll, gnorm};

    const double t_ab = specfun::trigamma(a + b);
    const double h11 = n * (t_ab - specfun::trigamma(a));
    const double h22 = n * (t_ab - specfun::trigamma(b));
    const double h12 = n * t_ab;
    const double det = h11 * h22 - h12 * h12;
    if (!(std::isfinite(det) && det != 0.0)) throw StepFailureError("fit_mle: singular Hessian", a, b);
    // delta = -H^{-1} g
    const double da = -(h22 * g.first - h12 * g.second) / det;
    const double db = -(h11 * g.second - h12 * g.first) / det;

    const double slack = 1e-13 * std::max(1.0, std::abs(ll));
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      const double na = a + step * da;
      const double nb = b + step * db;
      if (!(na > 0.0 && nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) continue;
      const BetaKotzParams cand(na, nb);
      const double cand_ll = log_likelihood(cand, stats);
      if (!(cand_ll >= ll - slack)) continue;
      a = na;
      b = nb;
      ll = cand_ll;
      g = score(cand, stats);
      accepted = true;
      break;
    }
    if (!accepted) throw StepFailureError("fit_mle: step halving floor reached", a, b);
  }
  const double gnorm = max_abs(g) / n;
  return FitResult{BetaKotzParams(a, b), max_iters, gnorm <= grad_tol, ll, gnorm};
}

}  // namespace bkrisk::estimation
