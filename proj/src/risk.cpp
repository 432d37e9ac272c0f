#include "bkrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bkrisk/errors.hpp"
#include "bkrisk/quadrature.hpp"
#include "bkrisk/roots.hpp"

namespace bkrisk::risk {
namespace {

constexpr double kTailRelTol = 1e-12;
constexpr double kPanelRatio = 0.1;
constexpr double kTailCutoff = 1e-12;

std::string shape_label(const BetaKotzParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << p.a() << ", b=" << p.b() << ")";
  return os.str();
}

// Asymptotic starting point from the tail expansions I_x ~ x^a / (a B).
double initial_guess(const BetaKotzParams& p, double lower, double upper) {
  const double ln_b = -p.log_norm_const();
  double g;
  if (lower <= upper) {
    g = std::exp((std::log(lower) + std::log(p.a()) + ln_b) / p.a());
  } else {
    g = -std::expm1((std::log(upper) + std::log(p.b()) + ln_b) / p.b());
  }
  if (!(g > 0.0 && g < 1.0)) g = mean(p);
  return g;
}

// Root of F(x) = lower (equivalently S(x) = upper). Both probabilities are
// passed so that the smaller one, which carries full relative precision, drives
// the residual.
double solve_quantile(const BetaKotzParams& p, double lower, double upper, double tol, const RootSolveConfig& cfg) {
  const bool use_upper = upper < lower;
  const auto residual = [&](double x) {
    return use_upper ? upper - survival(p, x) : cdf(p, x) - lower;
  };
  const auto fdf = [&](double x) -> FunctionAndDerivative {
    return {residual(x), std::exp(log_pdf_interior(p, x))};
  };
  const double f_lo = residual(cfg.bracket_lo);
  const double f_hi = residual(cfg.bracket_hi);
  if (f_lo > 0.0 || f_hi < 0.0)
    throw DomainError("var_numeric: bracket does not contain the quantile for " + shape_label(p));
  const double x0 = std::clamp(initial_guess(p, lower, upper), cfg.bracket_lo, cfg.bracket_hi);
  return solve_increasing(fdf, cfg.bracket_lo, cfg.bracket_hi, f_lo, f_hi, x0, tol, cfg.max_iters).x;
}

// Real root in (0, 1) of 4x^3 - 3x^4 = alpha, the Beta(3, 2) distribution function.
// With y = 1/x the quartic is depressed, y^4 - (4/alpha) y + 3/alpha = 0, and
// Ferrari's resolvent m^3 - (3/alpha) m - 2/alpha^2 = 0 has the single real root below.
double beta32_quantile(double alpha) {
  const double s1 = std::sqrt(1.0 - alpha);
  const double m = std::pow(alpha, -2.0 / 3.0) * (std::cbrt(1.0 + s1) + std::cbrt(alpha / (1.0 + s1)));
  const double s = std::sqrt(2.0 * m);
  const double disc = 8.0 / (alpha * s) - 2.0 * m;
  return 2.0 / (s + std::sqrt(std::max(disc, 0.0)));
}

bool is_integer(double v) { return v == std::floor(v); }

double tail_identity_with(const BetaKotzParams& p, double tail, double quantile) {
  return mean(p) * specfun::reg_inc_beta_complement(p.a() + 1.0, p.b(), quantile) / tail;
}

CvarRoutes routes_with_quantile(const BetaKotzParams& p, ConfidenceLevel alpha, double q, const RootSolveConfig& cfg) {
  CvarRoutes r{q, tail_identity_with(p, alpha.tail(), q), cvar_quadrature(p, alpha, cfg)};
  if (!(std::abs(r.identity - r.quadrature) <= kCvarAgreementTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "cvar: tail identity " << r.identity << " and quadrature " << r.quadrature << " disagree for "
       << shape_label(p) << " at alpha=" << alpha.value();
    throw ConsistencyError(os.str());
  }
  return r;
}

}  // namespace

void RootSolveConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("RootSolveConfig: abs_tol must be positive");
  if (max_iters < 1) throw DomainError("RootSolveConfig: max_iters must be positive");
  if (!(bracket_lo >= 0.0 && bracket_lo < bracket_hi && bracket_hi <= 1.0))
    throw DomainError("RootSolveConfig: bracket must satisfy 0 <= lo < hi <= 1");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::numeric:
      return "numeric";
    case Method::both_agreeing:
      return "both_agreeing";
  }
  return "unknown";
}

double var_numeric(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  cfg.validate();
  return solve_quantile(p, alpha.value(), alpha.tail(), cfg.abs_tol, cfg);
}

double upper_tail_quantile(const BetaKotzParams& p, double tail_prob, const RootSolveConfig& cfg) {
  cfg.validate();
  if (!(tail_prob > 0.0 && tail_prob < 1.0)) throw DomainError("upper_tail_quantile: tail probability must lie in (0, 1)");
  const double lower = 1.0 - tail_prob;
  const double tol = std::min(cfg.abs_tol, kTailRelTol * std::min(tail_prob, lower));
  return solve_quantile(p, lower, tail_prob, tol, cfg);
}

std::optional<double> var_closed(const BetaKotzParams& p, ConfidenceLevel alpha) {
  const double a = p.a();
  const double b = p.b();
  const double al = alpha.value();
  const double tail = alpha.tail();
  if (b == 1.0 && a >= 1.0 && is_integer(a)) return a == 1.0 ? al : std::pow(al, 1.0 / a);
  if (a == 1.0 && b == 2.0) return 1.0 - std::sqrt(tail);
  if (a == 2.0 && b == 2.0) return 0.5 + std::sin(std::asin(2.0 * al - 1.0) / 3.0);
  if (a == 3.0 && b == 2.0) return beta32_quantile(al);
  if (a == 1.0 && b == 3.0) return 1.0 - std::cbrt(tail);
  // 3x^4 - 8x^3 + 6x^2 = alpha becomes the (3, 2) quartic under x -> 1 - x.
  if (a == 2.0 && b == 3.0) return 1.0 - beta32_quantile(tail);
  if (a == 1.0 && b == 4.0) return 1.0 - std::sqrt(std::sqrt(tail));
  return std::nullopt;
}

double cvar_tail_identity(const BetaKotzParams& p, ConfidenceLevel alpha, double quantile) {
  if (!(quantile >= 0.0 && quantile <= 1.0)) throw DomainError("cvar_tail_identity: quantile must lie in [0, 1]");
  return tail_identity_with(p, alpha.tail(), quantile);
}

double cvar_quadrature(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  const GaussLegendreRule& rule = gauss_legendre_64();
  const double total = alpha.tail();
  const double cutoff = total * kTailCutoff;
  double sum = 0.0;
  double hi = total;
  while (hi > cutoff) {
    const double lo = hi * kPanelRatio;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      panel += rule.weights[i] * upper_tail_quantile(p, mid + half * rule.nodes[i], cfg);
    }
    sum += half * panel;
    hi = lo;
  }
  // VaR_nu lies between VaR at the sliver's edge and 1.
  sum += 0.5 * hi * (1.0 + upper_tail_quantile(p, hi, cfg));
  return sum / total;
}

CvarRoutes cvar_routes(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  return routes_with_quantile(p, alpha, var_numeric(p, alpha, cfg), cfg);
}

double cvar(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  return cvar_routes(p, alpha, cfg).identity;
}

std::optional<double> cvar_closed(const BetaKotzParams& p, ConfidenceLevel alpha) {
  const double a = p.a();
  const double b = p.b();
  const double al = alpha.value();
  const double tail = alpha.tail();
  if (a == 1.0 && b == 1.0) return 0.5 * (1.0 + al);
  if (b == 1.0 && a >= 1.0 && is_integer(a)) {
    // a (1 - alpha^{(a+1)/a}) / ((a+1)(1-alpha))
    return -a * std::expm1((a + 1.0) / a * std::log(al)) / ((a + 1.0) * tail);
  }
  if (a == 1.0 && b == 2.0) return 1.0 - 2.0 / 3.0 * std::sqrt(tail);
  if (a == 1.0 && b == 3.0) return 1.0 - 0.75 * std::cbrt(tail);
  if (a == 1.0 && b == 4.0) return 1.0 - 0.8 * std::sqrt(std::sqrt(tail));
  return std::nullopt;
}

double ec(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  const auto closed = var_closed(p, alpha);
  const double q = closed ? *closed : var_numeric(p, alpha, cfg);
  return q - mean(p);
}

RiskReport report(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg, MethodChoice choice) {
  const auto closed = var_closed(p, alpha);
  double q = 0.0;
  double tail_mean = 0.0;
  Method method = Method::numeric;

  switch (choice) {
    case MethodChoice::closed: {
      if (!closed) throw DomainError("report: no closed-form VaR for " + shape_label(p));
      q = *closed;
      method = Method::closed_form;
      const auto closed_cvar = cvar_closed(p, alpha);
      tail_mean = closed_cvar ? *closed_cvar : cvar_tail_identity(p, alpha, q);
      break;
    }
    case MethodChoice::numeric:
      q = var_numeric(p, alpha, cfg);
      tail_mean = routes_with_quantile(p, alpha, q, cfg).identity;
      break;
    case MethodChoice::both: {
      const double numeric = var_numeric(p, alpha, cfg);
      if (closed) {
        if (!(std::abs(*closed - numeric) <= kClosedNumericTol)) {
          std::ostringstream os;
          os.precision(17);
          os << "report: closed-form VaR " << *closed << " and numeric root " << numeric << " disagree for "
             << shape_label(p);
          throw ConsistencyError(os.str());
        }
        q = *closed;
        method = Method::both_agreeing;
      } else {
        q = numeric;
      }
      tail_mean = routes_with_quantile(p, alpha, numeric, cfg).identity;
      break;
    }
  }

  if (!(q > 0.0 && q < 1.0))
    throw RangeError("report: VaR is indistinguishable from an endpoint in double precision for " + shape_label(p));
  if (tail_mean < q) throw ConsistencyError("report: CVaR below VaR for " + shape_label(p));
  const double m = mean(p);
  return RiskReport{alpha, q, tail_mean, q - m, m, method};
}

double var_normal(double mu, double sigma, ConfidenceLevel alpha) {
  if (!(sigma > 0.0)) throw DomainError("var_normal: sigma must be positive");
  return mu + sigma * specfun::std_normal_quantile(alpha.value());
}

double cvar_normal(double mu, double sigma, ConfidenceLevel alpha) {
  if (!(sigma > 0.0)) throw DomainError("cvar_normal: sigma must be positive");
  const double z = specfun::std_normal_quantile(alpha.value());
  return mu + sigma * specfun::std_normal_pdf(z) / alpha.tail();
}

double student_t_quantile(double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("student_t_quantile: nu must be positive");
  cfg.validate();
  const double al = alpha.value();
  if (al == 0.5) return 0.0;
  // P(T > x) = I_w(nu/2, 1/2) / 2 with w = nu / (nu + x^2), for x >= 0.
  const double tail = std::min(al, 1.0 - al);
  const double two_tail = 2.0 * tail;
  double x;
  if (two_tail >= 0.5) {
    // Near the centre solve for y = 1 - w ~ Beta(1/2, nu/2).
    const BetaKotzParams centre(0.5, 0.5 * nu);
    const double y = solve_quantile(centre, 1.0 - two_tail, two_tail, cfg.abs_tol, cfg);
    x = std::sqrt(nu * y / (1.0 - y));
  } else {
    const BetaKotzParams outer(0.5 * nu, 0.5);
    const double tol = std::min(cfg.abs_tol, kTailRelTol * two_tail);
    const double w = solve_quantile(outer, two_tail, 1.0 - two_tail, tol, cfg);
    x = std::sqrt(nu * (1.0 - w) / w);
  }
  return al > 0.5 ? x : -x;
}

double var_student(double mu, double sigma, double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  if (!(sigma > 0.0)) throw DomainError("var_student: sigma must be positive");
  return mu + sigma * student_t_quantile(nu, alpha, cfg);
}

double cvar_student(double mu, double sigma, double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg) {
  if (!(sigma > 0.0)) throw DomainError("cvar_student: sigma must be positive");
  if (!(nu > 1.0)) throw DomainError("cvar_student: nu must exceed 1 for a finite tail mean");
  const double q = student_t_quantile(nu, alpha, cfg);
  using specfun::ln_gamma;
  const double log_density = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
                             0.5 * (nu + 1.0) * std::log1p(q * q / nu);
  const double standardized = std::exp(log_density) / alpha.tail() * (nu + q * q) / (nu - 1.0);
  return mu + sigma * standardized;
}

}  // namespace bkrisk::risk
