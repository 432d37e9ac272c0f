#pragma once

// Test-only reference implementations. Nothing here calls into the library, so
// each oracle is an independent route to the value under test.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Bisection on an increasing function; 200 halvings is far below double resolution.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double normal_quantile(double alpha) {
  // The upper half goes through symmetry: 1 - alpha is exact there, while
  // normal_cdf(z) near 1 is not.
  if (alpha > 0.5) return -normal_quantile(1.0 - alpha);
  return bisect([&](double z) { return normal_cdf(z) - alpha; }, -40.0, 40.0);
}

/// Adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  struct Rec {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } rec{f};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec.run(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// 12-point Gauss-Legendre on [lo, hi]; exact for polynomials of degree <= 23.
inline double gauss12(const std::function<double(double)>& f, double lo, double hi) {
  static constexpr std::array<std::array<double, 2>, 6> kHalf{{
      {0.12523340851146891, 0.24914704581340269},
      {0.36783149899818018, 0.23349253653835464},
      {0.58731795428661748, 0.20316742672306565},
      {0.76990267419430469, 0.16007832854334611},
      {0.9041172563704748, 0.10693932599531888},
      {0.98156063424671924, 0.047175336386512022},
  }};
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double s = 0.0;
  for (const auto& [x, w] : kHalf) s += w * (f(c - h * x) + f(c + h * x));
  return h * s;
}

inline double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Integral of x^p (1-x)^(b-1) over [lo, 1] for integer p >= 0, b >= 1, expanded in u = 1 - x:
/// sum_j C(p, j) (-1)^j u^(b-1+j), integrated over u in [0, 1 - lo].
inline double poly_upper_integral(int p, int b, double lo) {
  const double u = 1.0 - lo;
  double s = 0.0;
  for (int j = 0; j <= p; ++j) {
    const int e = b + j;
    s += binom(p, j) * ((j % 2) ? -1.0 : 1.0) * std::pow(u, e) / e;
  }
  return s;
}

/// Exact distribution and tail mean for integer shapes.
inline double beta_int_survival(int a, int b, double x) {
  return poly_upper_integral(a - 1, b, x) / beta_fn(a, b);
}
inline double beta_int_cvar(int a, int b, double q, double alpha) {
  return poly_upper_integral(a, b, q) / beta_fn(a, b) / (1.0 - alpha);
}

/// Beta(a, b) density integrated over [0, 1] via x = sin^2(theta), which removes
/// the endpoint singularities for a, b >= 1/2.
inline double beta_mass(double a, double b, double tol = 1e-10) {
  const double c = 1.0 / beta_fn(a, b);
  const auto g = [&](double t) {
    const double s = std::sin(t);
    const double co = std::cos(t);
    return 2.0 * c * std::pow(s, 2.0 * a - 1.0) * std::pow(co, 2.0 * b - 1.0);
  };
  return simpson(g, 0.0, std::numbers::pi / 2.0, tol);
}

/// Student-t distribution function by quadrature of the density from 0.
inline double t_cdf(double nu, double x) {
  const double c = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) / std::sqrt(nu * std::numbers::pi);
  const auto g = [&](double t) { return c * std::pow(1.0 + t * t / nu, -0.5 * (nu + 1.0)); };
  const double half = simpson(g, 0.0, std::abs(x), 1e-14);
  return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

inline double t_quantile(double nu, double alpha) {
  return bisect([&](double x) { return t_cdf(nu, x) - alpha; }, -1e3, 1e3);
}

/// Seeded Beta sampler from two gamma draws.
class BetaSampler {
 public:
  BetaSampler(double a, double b, unsigned long long seed) : ga_(a, 1.0), gb_(b, 1.0), rng_(seed) {}

  double operator()() {
    const double x = ga_(rng_);
    const double y = gb_(rng_);
    return x / (x + y);
  }

  std::vector<double> draw(std::size_t n) {
    std::vector<double> v(n);
    for (auto& e : v) e = (*this)();
    return v;
  }

 private:
  std::gamma_distribution<double> ga_;
  std::gamma_distribution<double> gb_;
  std::mt19937_64 rng_;
};

}  // namespace oracle
