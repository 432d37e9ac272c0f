#include "bkrisk/distribution.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "bkrisk/errors.hpp"

namespace bkrisk {
namespace {

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_unit_interval(const char* fn, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(fn) + ": x must lie in [0, 1] (got " + fmt_value(x) + ")");
}

// Endpoint factor x^e at x = 0 for the density.
double endpoint_power(double exponent, const char* which) {
  if (exponent > 0.0) return 0.0;
  if (exponent == 0.0) return 1.0;
  throw RangeError(std::string("pdf: density is infinite at x = ") + which);
}

constexpr int kMaxProductMoment = 64;

}  // namespace

void KotzGeneratorParams::validate() const {
  if (!(n1 > 0.0)) throw DomainError("KotzGeneratorParams: n1 > 0 violated (n1 = " + fmt_value(n1) + ")");
  if (!(n2 > 0.0)) throw DomainError("KotzGeneratorParams: n2 > 0 violated (n2 = " + fmt_value(n2) + ")");
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw DomainError("KotzGeneratorParams: t1 and t2 must be finite");
  const double a = (t1 - 1.0) + n1 / 2.0;
  const double b = (t2 - 1.0) + n2 / 2.0;
  if (!(a > 0.0)) throw DomainError("KotzGeneratorParams: t1 + n1/2 - 1 > 0 violated (a = " + fmt_value(a) + ")");
  if (!(b > 0.0)) throw DomainError("KotzGeneratorParams: t2 + n2/2 - 1 > 0 violated (b = " + fmt_value(b) + ")");
}

ConfidenceLevel::ConfidenceLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("ConfidenceLevel: alpha must lie in (0, 1) (got " + fmt_value(alpha) + ")");
}

BetaKotzParams::BetaKotzParams(double a, double b) : a_(a), b_(b), log_norm_const_(0.0) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("BetaKotzParams: a must be positive (got " + fmt_value(a) + ")");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("BetaKotzParams: b must be positive (got " + fmt_value(b) + ")");
  log_norm_const_ = -specfun::ln_beta(a, b);
}

BetaKotzParams from_kotz(const KotzGeneratorParams& k) {
  k.validate();
  // (t - 1) first: t = 1 then yields n/2 bit-for-bit.
  return BetaKotzParams((k.t1 - 1.0) + k.n1 / 2.0, (k.t2 - 1.0) + k.n2 / 2.0);
}

double log_pdf_interior(const BetaKotzParams& p, double x) {
  return p.log_norm_const() + (p.a() - 1.0) * std::log(x) + (p.b() - 1.0) * std::log1p(-x);
}

double pdf(const BetaKotzParams& p, double x) {
  require_unit_interval("pdf", x);
  const double c = std::exp(p.log_norm_const());
  if (x == 0.0) return c * endpoint_power(p.a() - 1.0, "0");
  if (x == 1.0) return c * endpoint_power(p.b() - 1.0, "1");
  return std::exp(log_pdf_interior(p, x));
}

double cdf(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol) {
  require_unit_interval("cdf", x);
  return specfun::reg_inc_beta(p.a(), p.b(), x, tol);
}

double survival(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol) {
  require_unit_interval("survival", x);
  return specfun::reg_inc_beta_complement(p.a(), p.b(), x, tol);
}

double cdf_hypergeometric(const BetaKotzParams& p, double x, const specfun::EvalTolerances& tol) {
  require_unit_interval("cdf_hypergeometric", x);
  if (x == 0.0) return 0.0;
  const double a = p.a();
  const double lead = std::exp(p.log_norm_const() + a * std::log(x)) / a;
  return lead * specfun::gauss_2f1(a, 1.0 - p.b(), a + 1.0, x, tol);
}

double moment(const BetaKotzParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("moment: order must be non-negative (got " + fmt_value(t) + ")");
  const double a = p.a();
  const double ab = a + p.b();
  if (t == std::floor(t) && t <= kMaxProductMoment) {
    // Integer orders: product of ratios, each below one, so no overflow.
    double m = 1.0;
    for (int k = 0; k < static_cast<int>(t); ++k) m *= (a + k) / (ab + k);
    return m;
  }
  using specfun::ln_gamma;
  return std::exp((ln_gamma(a + t) - ln_gamma(a)) + (ln_gamma(ab) - ln_gamma(ab + t)));
}

double mean(const BetaKotzParams& p) { return p.a() / (p.a() + p.b()); }

double variance(const BetaKotzParams& p) {
  const double s = p.a() + p.b();
  return p.a() * p.b() / (s * s * (s + 1.0));
}

}  // namespace bkrisk
