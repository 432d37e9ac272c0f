#pragma once

#include <istream>
#include <string>
#include <vector>

#include "bkrisk/credit.hpp"
#include "bkrisk/errors.hpp"

namespace bkrisk::credit {

/// Malformed portfolio input; carries the 1-based line and the column name.
class CsvError : public DomainError {
 public:
  CsvError(const std::string& what, std::size_t line, std::string column)
      : DomainError(what), line_(line), column_(std::move(column)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

/// Splits one CSV record, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_no);

/// Reads a portfolio with a header row. Required columns: id, rating, segment,
/// ead, guarantee, days_past_due; optional: pd_override, lgd_override. Column
/// order is free and names are case-insensitive. Empty override cells mean
/// "use the table".
std::vector<Obligor> read_portfolio_csv(std::istream& in);

// Rendering. Currency is shown with 2 decimals, rate-domain quantities
// (alpha and the fitted shapes) with 9 significant digits.
std::string format_currency(double v);
std::string format_rate(double v);

std::string render_table(const PortfolioReport& r);
std::string render_csv(const PortfolioReport& r);
std::string render_json(const PortfolioReport& r);

/// Inverse of render_json. Values come back at rendered precision, so
/// render_json(parse_report_json(render_json(r))) == render_json(r).
PortfolioReport parse_report_json(const std::string& text);

}  // namespace bkrisk::credit
