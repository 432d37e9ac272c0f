#include "bkrisk/credit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "bkrisk/errors.hpp"
#include "bkrisk/estimation.hpp"
#include "bkrisk/summation.hpp"

namespace bkrisk::credit {
namespace {

constexpr std::array<std::string_view, kRatingCount> kRatingNames{"AA", "A", "BB", "B", "CC", "Default"};
constexpr std::array<std::string_view, kSegmentCount> kSegmentNames{"Automobiles", "Other", "CreditCard",
                                                                    "CFCAutomobiles", "CFCOther"};
constexpr std::array<std::string_view, kGuaranteeCount> kGuaranteeNames{
    "AdmissibleFinancialCollateral", "CommercialResidentialRealEstate", "RealEstateLeasing", "OtherLeasing",
    "Receivables", "OtherAdmissible", "NonAdmissible", "NoGuarantee"};

bool iequals(std::string_view x, std::string_view y) {
  return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](char c, char d) {
           return std::tolower(static_cast<unsigned char>(c)) == std::tolower(static_cast<unsigned char>(d));
         });
}

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (iequals(s, names[i])) return static_cast<E>(i);
  }
  return std::nullopt;
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::string_view to_string(Rating r) { return kRatingNames[static_cast<std::size_t>(r)]; }
std::string_view to_string(Segment s) { return kSegmentNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Guarantee g) { return kGuaranteeNames[static_cast<std::size_t>(g)]; }

std::optional<Rating> parse_rating(std::string_view s) { return parse_enum<Rating>(s, kRatingNames); }
std::optional<Segment> parse_segment(std::string_view s) { return parse_enum<Segment>(s, kSegmentNames); }
std::optional<Guarantee> parse_guarantee(std::string_view s) { return parse_enum<Guarantee>(s, kGuaranteeNames); }

void Obligor::validate() const {
  if (!(ead >= 0.0) || !std::isfinite(ead)) throw DomainError("obligor " + id + ": ead must be a non-negative number");
  if (days_past_due < 0) throw DomainError("obligor " + id + ": days_past_due must be non-negative");
  if (pd_override && !is_probability(*pd_override)) throw DomainError("obligor " + id + ": pd_override must lie in [0, 1]");
  if (lgd_override && !is_probability(*lgd_override))
    throw DomainError("obligor " + id + ": lgd_override must lie in [0, 1]");
}

const PdTable& PdTable::standard() {
  // Rows AA, A, BB, B, CC, Default; columns Automobiles, Other, CreditCard, CFCAutomobiles, CFCOther.
  static const PdTable table(Matrix{{
      {0.0097, 0.0210, 0.0158, 0.0102, 0.0354},
      {0.0312, 0.0388, 0.0535, 0.0288, 0.0719},
      {0.0748, 0.1268, 0.0953, 0.1234, 0.1586},
      {0.1576, 0.1416, 0.1417, 0.2427, 0.3118},
      {0.3101, 0.2257, 0.1706, 0.4332, 0.4101},
      {1.0, 1.0, 1.0, 1.0, 1.0},
  }});
  return table;
}

PdTable::PdTable(const Matrix& m) : m_(m) {
  for (const auto& row : m_) {
    for (double v : row) {
      if (!(v > 0.0 && v <= 1.0)) throw DomainError("PdTable: every entry must lie in (0, 1]");
    }
  }
  for (double v : m_[static_cast<std::size_t>(Rating::Default)]) {
    if (v != 1.0) throw DomainError("PdTable: the Default row must be 1");
  }
}

const LgdSchedule& LgdSchedule::standard() {
  static const LgdSchedule schedule(Rules{{
      {kFinancialCollateralLgd, {}},
      {0.40, {{360, 0.70}, {720, 1.0}}},
      {0.35, {{360, 0.70}, {720, 1.0}}},
      {0.45, {{270, 0.70}, {540, 1.0}}},
      {0.45, {{360, 0.80}, {720, 1.0}}},
      {0.50, {{270, 0.70}, {540, 1.0}}},
      {0.60, {{210, 0.70}, {420, 1.0}}},
      {0.75, {{30, 0.85}, {90, 1.0}}},
  }});
  return schedule;
}

LgdSchedule::LgdSchedule(Rules rules) : rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    if (!is_probability(r.base)) throw DomainError("LgdSchedule: base LGD must lie in [0, 1]");
    long prev_days = 0;
    double prev_lgd = r.base;
    for (const auto& t : r.tiers) {
      if (!(t.days > prev_days)) throw DomainError("LgdSchedule: tier thresholds must be positive and strictly increasing");
      if (!(t.lgd >= prev_lgd && t.lgd <= 1.0)) throw DomainError("LgdSchedule: tier LGDs must be non-decreasing in [0, 1]");
      prev_days = t.days;
      prev_lgd = t.lgd;
    }
    if (!r.tiers.empty() && r.tiers.back().lgd != 1.0) throw DomainError("LgdSchedule: the terminal tier must be 1");
  }
}

double LgdSchedule::lookup(Guarantee g, long days_past_due) const {
  if (days_past_due < 0) throw DomainError("lgd_lookup: days_past_due must be non-negative");
  const LgdRule& r = rule(g);
  double lgd = r.base;
  for (const auto& t : r.tiers) {
    if (days_past_due >= t.days) lgd = t.lgd;
  }
  return lgd;
}

double pd_lookup(const PdTable& table, Rating r, Segment s) { return table.lookup(r, s); }

double lgd_lookup(const LgdSchedule& schedule, Guarantee g, long days_past_due) {
  return schedule.lookup(g, days_past_due);
}

double expected_loss(const Obligor& o, const PdTable& pd, const LgdSchedule& lgd) {
  o.validate();
  const double p = o.pd_override ? *o.pd_override : pd.lookup(o.rating, o.segment);
  const double l = o.lgd_override ? *o.lgd_override : lgd.lookup(o.guarantee, o.days_past_due);
  return o.ead * p * l;
}

double total_exposure(std::span<const Obligor> portfolio) {
  CompensatedSum total;
  for (const auto& o : portfolio) total.add(o.ead);
  return total.value();
}

std::vector<double> loss_rates(std::span<const Obligor> portfolio, const PdTable& pd, const LgdSchedule& lgd) {
  for (const auto& o : portfolio) o.validate();
  const double total = total_exposure(portfolio);
  if (!(total > 0.0)) throw DomainError("loss_rates: total exposure must be positive");
  std::vector<double> rates;
  rates.reserve(portfolio.size());
  for (const auto& o : portfolio) rates.push_back(expected_loss(o, pd, lgd) / total);
  return rates;
}

PortfolioReport period_report(std::string label, std::span<const Obligor> portfolio, const PdTable& pd,
                              const LgdSchedule& lgd, ConfidenceLevel alpha, const risk::RootSolveConfig& cfg) {
  if (portfolio.empty()) throw DomainError("period_report: portfolio is empty");
  const auto rates = loss_rates(portfolio, pd, lgd);
  std::vector<double> sample;
  sample.reserve(rates.size());
  for (double r : rates) {
    if (r > 0.0) sample.push_back(r);
  }
  if (sample.size() < 2) throw DomainError("period_report: fewer than two obligors with a positive expected loss");
  // Welford's recurrence depends on order at the rounding level; sorting makes
  // the fit independent of how the obligors were listed.
  std::sort(sample.begin(), sample.end());

  const auto fitted = estimation::fit_moments(estimation::stats_from_samples(sample));
  const auto measures = risk::report(fitted, alpha, cfg);
  const double exposure = total_exposure(portfolio);

  PortfolioReport out;
  out.label = std::move(label);
  out.total_exposure = exposure;
  out.expected_loss = to_currency(measures.mean, exposure);
  out.var = to_currency(measures.var, exposure);
  out.cvar = to_currency(measures.cvar, exposure);
  out.ec = out.var - out.expected_loss;
  out.fitted = fitted;
  out.alpha = alpha;
  out.obligor_count = portfolio.size();
  return out;
}

}  // namespace bkrisk::credit
