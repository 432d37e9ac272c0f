#pragma once

#include <functional>

namespace bkrisk {

struct RootResult {
  double x;
  double residual;
  int iterations;
};

struct FunctionAndDerivative {
  double f;
  double df;
};

/// Safeguarded Newton iteration for an increasing function on [lo, hi].
///
/// `fdf(x)` returns {f(x), f'(x)}; it is only called at interior points, so
/// f' may be unbounded at the endpoints. `f_lo` and `f_hi` are the values at
/// the bracket ends and must straddle zero. Newton steps that leave the current
/// bracket are replaced by bisection. Stops when |f| <= abs_tol or when the
/// iterate can no longer move at double precision. Throws ConvergenceError
/// carrying the final bracket once `max_iters` is spent.
RootResult solve_increasing(const std::function<FunctionAndDerivative(double)>& fdf, double lo, double hi,
                            double f_lo, double f_hi, double x0, double abs_tol, int max_iters);

}  // namespace bkrisk
