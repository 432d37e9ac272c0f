#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bkrisk/distribution.hpp"
#include "bkrisk/risk.hpp"

namespace bkrisk::credit {

enum class Rating { AA, A, BB, B, CC, Default };
enum class Segment { Automobiles, Other, CreditCard, CFCAutomobiles, CFCOther };
enum class Guarantee {
  AdmissibleFinancialCollateral,
  CommercialResidentialRealEstate,
  RealEstateLeasing,
  OtherLeasing,
  Receivables,
  OtherAdmissible,
  NonAdmissible,
  NoGuarantee,
};

inline constexpr std::size_t kRatingCount = 6;
inline constexpr std::size_t kSegmentCount = 5;
inline constexpr std::size_t kGuaranteeCount = 8;

std::string_view to_string(Rating r);
std::string_view to_string(Segment s);
std::string_view to_string(Guarantee g);

// Case-insensitive; empty optional on an unknown spelling.
std::optional<Rating> parse_rating(std::string_view s);
std::optional<Segment> parse_segment(std::string_view s);
std::optional<Guarantee> parse_guarantee(std::string_view s);

struct Obligor {
  std::string id;
  Rating rating = Rating::AA;
  Segment segment = Segment::Other;
  double ead = 0.0;
  Guarantee guarantee = Guarantee::NoGuarantee;
  long days_past_due = 0;
  std::optional<double> pd_override;
  std::optional<double> lgd_override;

  /// ead >= 0 and finite, days >= 0, overrides in [0, 1].
  void validate() const;
};

/// Probability of default by rating and segment.
class PdTable {
 public:
  using Matrix = std::array<std::array<double, kSegmentCount>, kRatingCount>;

  /// The supervisor's published table; the Default row is 1 everywhere.
  static const PdTable& standard();

  /// Throws DomainError unless every entry is in (0, 1] and the Default row is 1.
  explicit PdTable(const Matrix& m);

  double lookup(Rating r, Segment s) const { return m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]; }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

struct LgdTier {
  long days;  // inclusive lower bound
  double lgd;
};

struct LgdRule {
  double base;
  std::vector<LgdTier> tiers;  // ascending in days
};

/// Loss given default by guarantee class and days past due.
class LgdSchedule {
 public:
  using Rules = std::array<LgdRule, kGuaranteeCount>;

  static const LgdSchedule& standard();

  /// Throws DomainError unless tiers are strictly increasing in days,
  /// non-decreasing in lgd, and end at 1 whenever any tier exists.
  explicit LgdSchedule(Rules rules);

  double lookup(Guarantee g, long days_past_due) const;
  const LgdRule& rule(Guarantee g) const { return rules_[static_cast<std::size_t>(g)]; }

 private:
  Rules rules_;
};

/// Flat LGD for the financial-collateral class, which has no day tiers.
inline constexpr double kFinancialCollateralLgd = 0.12;

double pd_lookup(const PdTable& table, Rating r, Segment s);
double lgd_lookup(const LgdSchedule& schedule, Guarantee g, long days_past_due);

/// ead * PD * LGD, overrides taking precedence over the tables.
double expected_loss(const Obligor& o, const PdTable& pd, const LgdSchedule& lgd);

/// Compensated sum of EAD.
double total_exposure(std::span<const Obligor> portfolio);

/// expected_loss_i / total exposure, in portfolio order. DomainError if the total is 0.
std::vector<double> loss_rates(std::span<const Obligor> portfolio, const PdTable& pd, const LgdSchedule& lgd);

/// Rate-domain measure expressed in currency for a portfolio of the given exposure.
inline double to_currency(double rate, double exposure) { return rate * exposure; }

struct PortfolioReport {
  std::string label;
  double total_exposure = 0.0;
  double expected_loss = 0.0;
  double var = 0.0;
  double ec = 0.0;
  double cvar = 0.0;
  BetaKotzParams fitted{1.0, 1.0};
  ConfidenceLevel alpha{0.99};
  std::size_t obligor_count = 0;

  friend bool operator==(const PortfolioReport&, const PortfolioReport&) = default;
};

/// Fits the loss-rate sample by moments and prices the fitted law.
///
/// Obligors with zero expected loss count toward exposure but not toward the
/// fitting sample. Currency fields are the rate-domain mean, VaR and CVaR
/// times total exposure; ec is var - expected_loss in currency.
PortfolioReport period_report(std::string label, std::span<const Obligor> portfolio, const PdTable& pd,
                              const LgdSchedule& lgd, ConfidenceLevel alpha, const risk::RootSolveConfig& cfg = {});

}  // namespace bkrisk::credit
