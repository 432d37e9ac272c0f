#include "bkrisk/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "bkrisk/errors.hpp"

namespace bkrisk {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool collapsed(double lo, double hi) {
  const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
  return hi - lo <= 4.0 * kEps * scale;
}

}  // namespace

RootResult solve_increasing(const std::function<FunctionAndDerivative(double)>& fdf, double lo, double hi,
                            double f_lo, double f_hi, double x0, double abs_tol, int max_iters) {
  if (!(lo < hi)) throw DomainError("solve_increasing: bracket must satisfy lo < hi");
  if (f_lo > 0.0 || f_hi < 0.0) throw DomainError("solve_increasing: bracket does not straddle the root");
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};

  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int iter = 1; iter <= max_iters; ++iter) {
    const auto [f, df] = fdf(x);
    if (std::abs(f) <= abs_tol) return {x, f, iter};
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (collapsed(lo, hi)) return {x, f, iter};

    double next = x - f / df;
    const bool newton_ok = std::isfinite(next) && next > lo && next < hi;
    if (!newton_ok) next = 0.5 * (lo + hi);
    // A Newton step below rounding level cannot improve the residual further.
    if (newton_ok && std::abs(next - x) <= 2.0 * kEps * std::abs(x)) return {x, f, iter};
    x = next;
  }
  throw ConvergenceError("solve_increasing: iteration budget exhausted", x, max_iters, std::make_pair(lo, hi));
}

}  // namespace bkrisk
