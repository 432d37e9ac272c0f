#pragma once

#include <optional>
#include <string_view>

#include "bkrisk/distribution.hpp"

namespace bkrisk::risk {

/// Bracketed root solve settings for quantile inversion.
struct RootSolveConfig {
  double abs_tol = 1e-13;  // |F(x) - alpha|
  int max_iters = 200;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;

  void validate() const;
};

/// Provenance of the VaR figure in a report.
enum class Method { closed_form, numeric, both_agreeing };

/// What the caller asks for when building a report.
enum class MethodChoice { closed, numeric, both };

std::string_view to_string(Method m);

struct RiskReport {
  ConfidenceLevel alpha;
  double var;
  double cvar;
  double ec;
  double mean;
  Method method;

  friend bool operator==(const RiskReport&, const RiskReport&) = default;
};

/// Agreement required between the two CVaR routes.
inline constexpr double kCvarAgreementTol = 1e-8;
/// Agreement required between a closed-form VaR and the numeric root.
inline constexpr double kClosedNumericTol = 1e-10;

/// Unique root of F(x) = alpha in (0, 1) by safeguarded Newton with pdf as derivative.
double var_numeric(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

/// x with P(X > x) = tail_prob, solved against the survival function so that
/// tiny tail probabilities keep full relative accuracy.
double upper_tail_quantile(const BetaKotzParams& p, double tail_prob, const RootSolveConfig& cfg = {});

/// Closed-form VaR for the shape pairs with an explicit solution:
/// (n, 1) for integer n >= 1, (1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (1, 4).
std::optional<double> var_closed(const BetaKotzParams& p, ConfidenceLevel alpha);

/// Tail mean from the identity CVaR = E[X] (1 - I_q(a+1, b)) / (1 - alpha).
double cvar_tail_identity(const BetaKotzParams& p, ConfidenceLevel alpha, double quantile);

/// Tail mean as (1 / (1 - alpha)) * integral of VaR_nu over [alpha, 1].
///
/// The integral is taken in tau = 1 - nu over geometrically shrinking panels
/// (ratio 1/10) toward tau = 0, each with a 64-node Gauss-Legendre rule; every
/// panel stays a fixed relative distance away from the endpoint singularity
/// of the quantile function. The sliver below (1 - alpha) * 1e-12 is bounded
/// by a trapezoid against the supremum 1.
double cvar_quadrature(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

struct CvarRoutes {
  double quantile;
  double identity;
  double quadrature;
};

/// Both CVaR routes; throws ConsistencyError if they differ by more than kCvarAgreementTol.
CvarRoutes cvar_routes(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

/// CVaR from the tail identity, cross-checked against quadrature.
double cvar(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

/// Tabulated closed-form CVaR: (1, 1), (n, 1), (1, 2), (1, 3), (1, 4).
std::optional<double> cvar_closed(const BetaKotzParams& p, ConfidenceLevel alpha);

/// VaR - E[X], with the closed-form VaR when one exists.
double ec(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

RiskReport report(const BetaKotzParams& p, ConfidenceLevel alpha, const RootSolveConfig& cfg = {},
                  MethodChoice choice = MethodChoice::both);

// Location-scale baselines.

double var_normal(double mu, double sigma, ConfidenceLevel alpha);
double cvar_normal(double mu, double sigma, ConfidenceLevel alpha);

/// Standard Student-t quantile, inverted through the incomplete beta function.
double student_t_quantile(double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});
double var_student(double mu, double sigma, double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});
double cvar_student(double mu, double sigma, double nu, ConfidenceLevel alpha, const RootSolveConfig& cfg = {});

}  // namespace bkrisk::risk
