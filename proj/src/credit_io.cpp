#include "bkrisk/credit_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace bkrisk::credit {
namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw CsvError("line " + std::to_string(line) + ", column " + column + ": '" + cell + "' is not a number", line,
                   column);
  return v;
}

long parse_integer(const std::string& cell, std::size_t line, const std::string& column) {
  long v = 0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw CsvError("line " + std::to_string(line) + ", column " + column + ": '" + cell + "' is not an integer", line,
                   column);
  return v;
}

template <typename E>
E parse_enum_cell(const std::string& cell, std::optional<E> (*parse)(std::string_view), std::size_t line,
                  const std::string& column) {
  const auto v = parse(cell);
  if (!v) throw CsvError("line " + std::to_string(line) + ", column " + column + ": unknown value '" + cell + "'", line, column);
  return *v;
}

std::string fmt(const char* spec, double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), spec, v);
  return buf.data();
}

// Value as it reads back from its rendered form.
double currency_value(double v) { return std::stod(format_currency(v)); }
double rate_value(double v) { return std::stod(format_rate(v)); }

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = true;
      was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw CsvError("line " + std::to_string(line_no) + ": unterminated quoted field", line_no, "");
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

std::vector<Obligor> read_portfolio_csv(std::istream& in) {
  static const std::array<std::string, 6> kRequired{"id", "rating", "segment", "ead", "guarantee", "days_past_due"};
  static const std::array<std::string, 2> kOptional{"pd_override", "lgd_override"};

  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> index;
  bool have_header = false;
  std::vector<Obligor> out;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto cells = split_csv_record(line, line_no);

    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string name = lower(cells[i]);
        const bool known = std::find(kRequired.begin(), kRequired.end(), name) != kRequired.end() ||
                           std::find(kOptional.begin(), kOptional.end(), name) != kOptional.end();
        if (!known) throw CsvError("line " + std::to_string(line_no) + ": unknown column '" + cells[i] + "'", line_no, cells[i]);
        if (!index.emplace(name, i).second)
          throw CsvError("line " + std::to_string(line_no) + ": duplicate column '" + cells[i] + "'", line_no, cells[i]);
      }
      for (const auto& name : kRequired) {
        if (!index.contains(name))
          throw CsvError("line " + std::to_string(line_no) + ": missing required column '" + name + "'", line_no, name);
      }
      have_header = true;
      continue;
    }

    if (cells.size() != index.size())
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(index.size()) + " fields, found " +
                         std::to_string(cells.size()),
                     line_no, "");
    const auto cell = [&](const std::string& name) -> const std::string& { return cells[index.at(name)]; };

    Obligor o;
    o.id = cell("id");
    o.rating = parse_enum_cell<Rating>(cell("rating"), &parse_rating, line_no, "rating");
    o.segment = parse_enum_cell<Segment>(cell("segment"), &parse_segment, line_no, "segment");
    o.ead = parse_number(cell("ead"), line_no, "ead");
    o.guarantee = parse_enum_cell<Guarantee>(cell("guarantee"), &parse_guarantee, line_no, "guarantee");
    o.days_past_due = parse_integer(cell("days_past_due"), line_no, "days_past_due");
    for (const auto& name : kOptional) {
      if (!index.contains(name) || cell(name).empty()) continue;
      const double v = parse_number(cell(name), line_no, name);
      (name == "pd_override" ? o.pd_override : o.lgd_override) = v;
    }
    try {
      o.validate();
    } catch (const DomainError& e) {
      throw CsvError("line " + std::to_string(line_no) + ": " + e.what(), line_no, "");
    }
    out.push_back(std::move(o));
  }

  if (!have_header) throw CsvError("portfolio CSV is empty (a header row is required)", 0, "");
  if (out.empty()) throw CsvError("portfolio CSV has a header but no obligors", line_no, "");
  return out;
}

std::string format_currency(double v) {
  // Avoid printing "-0.00".
  const std::string s = fmt("%.2f", v);
  return s == "-0.00" ? "0.00" : s;
}

std::string format_rate(double v) { return fmt("%.9g", v); }

std::string render_table(const PortfolioReport& r) {
  std::ostringstream os;
  const auto row = [&](std::string_view k, const std::string& v) {
    os << k;
    for (std::size_t i = k.size(); i < 18; ++i) os << ' ';
    os << v << '\n';
  };
  row("period", r.label);
  row("obligors", std::to_string(r.obligor_count));
  row("alpha", format_rate(r.alpha.value()));
  row("fitted a", format_rate(r.fitted.a()));
  row("fitted b", format_rate(r.fitted.b()));
  row("total exposure", format_currency(r.total_exposure));
  row("expected loss", format_currency(r.expected_loss));
  row("VaR", format_currency(r.var));
  row("EC", format_currency(r.ec));
  row("CVaR", format_currency(r.cvar));
  return os.str();
}

std::string render_csv(const PortfolioReport& r) {
  std::string label = r.label;
  if (label.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : label) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    label = q + "\"";
  }
  std::ostringstream os;
  os << "label,obligor_count,alpha,fitted_a,fitted_b,total_exposure,expected_loss,var,ec,cvar\n";
  os << label << ',' << r.obligor_count << ',' << format_rate(r.alpha.value()) << ',' << format_rate(r.fitted.a()) << ','
     << format_rate(r.fitted.b()) << ',' << format_currency(r.total_exposure) << ',' << format_currency(r.expected_loss)
     << ',' << format_currency(r.var) << ',' << format_currency(r.ec) << ',' << format_currency(r.cvar) << '\n';
  return os.str();
}

std::string render_json(const PortfolioReport& r) {
  ordered_json j;
  j["label"] = r.label;
  j["obligor_count"] = r.obligor_count;
  j["alpha"] = rate_value(r.alpha.value());
  j["fitted"] = {{"a", rate_value(r.fitted.a())}, {"b", rate_value(r.fitted.b())}};
  j["total_exposure"] = currency_value(r.total_exposure);
  j["expected_loss"] = currency_value(r.expected_loss);
  j["var"] = currency_value(r.var);
  j["ec"] = currency_value(r.ec);
  j["cvar"] = currency_value(r.cvar);
  return j.dump(2) + "\n";
}

PortfolioReport parse_report_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    PortfolioReport r;
    r.label = j.at("label").get<std::string>();
    r.obligor_count = j.at("obligor_count").get<std::size_t>();
    r.alpha = ConfidenceLevel(j.at("alpha").get<double>());
    r.fitted = BetaKotzParams(j.at("fitted").at("a").get<double>(), j.at("fitted").at("b").get<double>());
    r.total_exposure = j.at("total_exposure").get<double>();
    r.expected_loss = j.at("expected_loss").get<double>();
    r.var = j.at("var").get<double>();
    r.ec = j.at("ec").get<double>();
    r.cvar = j.at("cvar").get<double>();
    return r;
  } catch (const ordered_json::exception& e) {
    throw DomainError(std::string("parse_report_json: ") + e.what());
  }
}

}  // namespace bkrisk::credit
