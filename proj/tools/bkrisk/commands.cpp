#include "commands.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bkrisk/credit.hpp"
#include "bkrisk/credit_io.hpp"
#include "bkrisk/errors.hpp"
#include "bkrisk/estimation.hpp"
#include "json.hpp"

namespace bkrisk::cli {
namespace {

using nlohmann::ordered_json;

enum class OutputFormat { table, csv, json };

// Raised for failures that belong to the numerical-failure class regardless of
// the exception type underneath (e.g. a portfolio whose sample cannot be fitted).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::optional<double> alpha;
  std::string format = "table";
  std::optional<double> abs_tol;
  std::optional<int> max_iters;
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;

  OutputFormat output_format() const {
    if (format == "csv") return OutputFormat::csv;
    if (format == "json") return OutputFormat::json;
    return OutputFormat::table;
  }

  ConfidenceLevel confidence() const {
    if (alpha) return ConfidenceLevel(*alpha);
    if (const char* env = std::getenv(kAlphaEnv); env != nullptr && *env != '\0') {
      double v = 0.0;
      const std::string_view s(env);
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError(std::string(kAlphaEnv) + "='" + env + "' is not a number");
      return ConfidenceLevel(v);
    }
    return ConfidenceLevel(0.99);
  }

  risk::RootSolveConfig root_config() const {
    risk::RootSolveConfig cfg;
    if (abs_tol) cfg.abs_tol = *abs_tol;
    if (max_iters) cfg.max_iters = *max_iters;
    if (bracket_lo) cfg.bracket_lo = *bracket_lo;
    if (bracket_hi) cfg.bracket_hi = *bracket_hi;
    cfg.validate();
    return cfg;
  }
};

void add_alpha_and_format(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--alpha", o.alpha, "Confidence level in (0, 1); default 0.99 or $" + std::string(kAlphaEnv));
  sub->add_option("--output-format", o.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
}

void add_root_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--abs-tol", o.abs_tol, "Root residual tolerance |F(x) - alpha|");
  sub->add_option("--max-iters", o.max_iters, "Root solver iteration budget");
  sub->add_option("--bracket-lo", o.bracket_lo, "Lower end of the root bracket");
  sub->add_option("--bracket-hi", o.bracket_hi, "Upper end of the root bracket");
}

std::string num(double v) { return credit::format_rate(v); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::optional<risk::Method> parse_method(std::string_view s) {
  for (auto m : {risk::Method::closed_form, risk::Method::numeric, risk::Method::both_agreeing}) {
    if (risk::to_string(m) == s) return m;
  }
  return std::nullopt;
}

ordered_json report_json(const ShapedReport& r) {
  ordered_json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["alpha"] = r.report.alpha.value();
  j["method"] = std::string(risk::to_string(r.report.method));
  j["var"] = r.report.var;
  j["cvar"] = r.report.cvar;
  j["ec"] = r.report.ec;
  j["mean"] = r.report.mean;
  return j;
}

// ---- measures -------------------------------------------------------------

struct MeasuresArgs {
  double a = 0.0;
  double b = 0.0;
  std::string method = "both";
  CommonOptions common;
};

void cmd_measures(const MeasuresArgs& args, std::ostream& out) {
  const BetaKotzParams p(args.a, args.b);
  const auto alpha = args.common.confidence();
  const auto cfg = args.common.root_config();
  const auto choice = args.method == "closed"    ? risk::MethodChoice::closed
                      : args.method == "numeric" ? risk::MethodChoice::numeric
                                                 : risk::MethodChoice::both;
  const ShapedReport r{p.a(), p.b(), risk::report(p, alpha, cfg, choice)};

  switch (args.common.output_format()) {
    case OutputFormat::json:
      out << risk_report_to_json(r);
      break;
    case OutputFormat::csv:
      out << "a,b,alpha,method,var,cvar,ec,mean\n"
          << num(r.a) << ',' << num(r.b) << ',' << num(alpha.value()) << ',' << risk::to_string(r.report.method) << ','
          << num(r.report.var) << ',' << num(r.report.cvar) << ',' << num(r.report.ec) << ',' << num(r.report.mean)
          << '\n';
      break;
    case OutputFormat::table:
      out << pad("a", 8) << num(r.a) << '\n'
          << pad("b", 8) << num(r.b) << '\n'
          << pad("alpha", 8) << num(alpha.value()) << '\n'
          << pad("method", 8) << risk::to_string(r.report.method) << '\n'
          << pad("var", 8) << num(r.report.var) << '\n'
          << pad("cvar", 8) << num(r.report.cvar) << '\n'
          << pad("ec", 8) << num(r.report.ec) << '\n'
          << pad("mean", 8) << num(r.report.mean) << '\n';
      break;
  }
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string path;
  std::string method = "mle";
  double grad_tol = estimation::kDefaultGradTol;
  int max_iters = estimation::kDefaultMaxIters;
  std::string format = "table";
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

// One value per line; a leading non-numeric line is taken as a column header.
std::vector<double> read_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::vector<double> xs;
  std::string line;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    if (cell.find(',') != std::string::npos)
      throw DomainError(path + ":" + std::to_string(line_no) + ": expected a single column");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    const bool numeric = ec == std::errc() && ptr == cell.data() + cell.size();
    if (!numeric) {
      const bool header = !seen_row && std::any_of(cell.begin(), cell.end(), [](unsigned char c) { return std::isalpha(c); });
      seen_row = true;
      if (header) continue;
      throw DomainError(path + ":" + std::to_string(line_no) + ": '" + cell + "' is not a number");
    }
    seen_row = true;
    if (!(v > 0.0 && v < 1.0))
      throw DomainError(path + ":" + std::to_string(line_no) + ": value " + cell + " lies outside (0, 1)");
    xs.push_back(v);
  }
  if (xs.size() < 2) throw DomainError(path + ": at least two observations are required");
  return xs;
}

void render_fit(const estimation::FitResult& f, const std::string& method, std::size_t n, const std::string& format,
                std::ostream& out) {
  if (format == "json") {
    ordered_json j;
    j["method"] = method;
    j["n"] = n;
    j["a"] = f.params.a();
    j["b"] = f.params.b();
    j["iterations"] = f.iterations;
    j["converged"] = f.converged;
    j["log_likelihood"] = f.log_likelihood;
    j["gradient_norm"] = f.gradient_norm;
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    out << "method,n,a,b,iterations,converged,log_likelihood,gradient_norm\n"
        << method << ',' << n << ',' << num(f.params.a()) << ',' << num(f.params.b()) << ',' << f.iterations << ','
        << (f.converged ? "true" : "false") << ',' << num(f.log_likelihood) << ',' << num(f.gradient_norm) << '\n';
  } else {
    out << pad("method", 16) << method << '\n'
        << pad("n", 16) << n << '\n'
        << pad("a", 16) << num(f.params.a()) << '\n'
        << pad("b", 16) << num(f.params.b()) << '\n'
        << pad("iterations", 16) << f.iterations << '\n'
        << pad("converged", 16) << (f.converged ? "true" : "false") << '\n'
        << pad("log-likelihood", 16) << num(f.log_likelihood) << '\n'
        << pad("gradient norm", 16) << num(f.gradient_norm) << '\n';
  }
}

int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  const auto xs = read_sample(args.path);
  const auto stats = estimation::stats_from_samples(xs);

  estimation::FitResult f{BetaKotzParams(1.0, 1.0)};
  if (args.method == "mom") {
    f.params = estimation::fit_moments(stats);
    f.converged = true;
    f.log_likelihood = estimation::log_likelihood(f.params, stats);
    const auto [ga, gb] = estimation::score(f.params, stats);
    f.gradient_norm = std::max(std::abs(ga), std::abs(gb)) / static_cast<double>(stats.n);
  } else {
    f = estimation::fit_mle(stats, std::nullopt, args.grad_tol, args.max_iters);
  }
  render_fit(f, args.method, stats.n, args.format, out);
  if (!f.converged) {
    err << "error: maximum likelihood did not converge in " << f.iterations << " iterations (gradient norm "
        << num(f.gradient_norm) << ")\n";
    return kNumericalFailure;
  }
  return kOk;
}

// ---- portfolio ------------------------------------------------------------

struct PortfolioArgs {
  std::string path;
  std::string label;
  CommonOptions common;
};

void cmd_portfolio(const PortfolioArgs& args, std::ostream& out) {
  const auto alpha = args.common.confidence();
  const auto cfg = args.common.root_config();
  std::ifstream in(args.path);
  if (!in) throw DomainError("cannot open '" + args.path + "'");
  const auto obligors = credit::read_portfolio_csv(in);
  const std::string label = args.label.empty() ? std::filesystem::path(args.path).stem().string() : args.label;

  credit::PortfolioReport r;
  try {
    r = credit::period_report(label, obligors, credit::PdTable::standard(), credit::LgdSchedule::standard(), alpha, cfg);
  } catch (const DomainError& e) {
    // The records parsed; what failed is fitting or pricing them.
    throw NumericalFailure(e.what());
  }
  switch (args.common.output_format()) {
    case OutputFormat::json: out << credit::render_json(r); break;
    case OutputFormat::csv: out << credit::render_csv(r); break;
    case OutputFormat::table: out << credit::render_table(r); break;
  }
}

// ---- tables ---------------------------------------------------------------

struct TablesArgs {
  std::string which;
  CommonOptions common;
};

void cmd_tables(const TablesArgs& args, std::ostream& out) {
  const auto alpha = args.common.confidence();
  const auto kind = args.which == "analytic" ? TableKind::analytic : TableKind::numeric;
  const auto rows = compute_table(kind, alpha, args.common.root_config());

  switch (args.common.output_format()) {
    case OutputFormat::json: {
      ordered_json j;
      j["table"] = args.which;
      j["alpha"] = alpha.value();
      j["rows"] = ordered_json::array();
      for (const auto& r : rows) j["rows"].push_back(report_json(r));
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << "a,b,var,cvar,ec,mean\n";
      for (const auto& r : rows)
        out << num(r.a) << ',' << num(r.b) << ',' << num(r.report.var) << ',' << num(r.report.cvar) << ','
            << num(r.report.ec) << ',' << num(r.report.mean) << '\n';
      break;
    case OutputFormat::table:
      out << "alpha = " << num(alpha.value()) << '\n';
      out << pad("a", 6) << pad("b", 6) << pad("VaR", 14) << pad("CVaR", 14) << pad("EC", 14) << "mean\n";
      for (const auto& r : rows)
        out << pad(num(r.a), 6) << pad(num(r.b), 6) << pad(num(r.report.var), 14) << pad(num(r.report.cvar), 14)
            << pad(num(r.report.ec), 14) << num(r.report.mean) << '\n';
      break;
  }
}

template <typename F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConsistencyError& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInconsistency;
  } catch (const InfeasibleMomentsError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (estimate " << num(e.estimate()) << " after " << e.iterations()
        << " iterations)\n";
    return kNumericalFailure;
  } catch (const StepFailureError& e) {
    err << "error: " << e.what() << " (at a = " << num(e.a()) << ", b = " << num(e.b()) << ")\n";
    return kNumericalFailure;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

std::vector<std::pair<double, double>> table_grid(TableKind kind) {
  if (kind == TableKind::analytic) return {{1, 1}, {2, 1}, {3, 1}, {1, 2}, {1, 3}, {1, 4}};
  return {{1, 1},   {2, 1},     {3, 1},   {1, 2},   {2, 2},     {3, 2},     {1, 3},   {2, 3},
          {1, 4},   {4.1, 1.0}, {5.1, 1.5}, {4.1, 4.1}, {5.1, 5.1}, {6.0, 6.0}, {0.6, 0.6}, {0.8, 0.8},
          {1.2, 11.4}, {1.3, 13.0}, {1.5, 14.1}, {2.0, 19.0}, {0.5, 30.0}};
}

std::vector<ShapedReport> compute_table(TableKind kind, ConfidenceLevel alpha, const risk::RootSolveConfig& cfg) {
  const auto choice = kind == TableKind::analytic ? risk::MethodChoice::closed : risk::MethodChoice::numeric;
  std::vector<ShapedReport> rows;
  for (const auto& [a, b] : table_grid(kind)) {
    const BetaKotzParams p(a, b);
    rows.push_back({a, b, risk::report(p, alpha, cfg, choice)});
  }
  return rows;
}

std::string risk_report_to_json(const ShapedReport& r) { return report_json(r).dump(2) + "\n"; }

ShapedReport risk_report_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    const auto method = parse_method(j.at("method").get<std::string>());
    if (!method) throw DomainError("risk_report_from_json: unknown method '" + j.at("method").get<std::string>() + "'");
    return ShapedReport{j.at("a").get<double>(), j.at("b").get<double>(),
                        risk::RiskReport{ConfidenceLevel(j.at("alpha").get<double>()), j.at("var").get<double>(),
                                         j.at("cvar").get<double>(), j.at("ec").get<double>(),
                                         j.at("mean").get<double>(), *method}};
  } catch (const ordered_json::exception& e) {
    throw DomainError(std::string("risk_report_from_json: ") + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Beta-Kotz risk measures, fitting and credit-portfolio reports", "bkrisk"};
  app.require_subcommand(1);

  MeasuresArgs measures;
  auto* m = app.add_subcommand("measures", "VaR, CVaR, EC and mean for one shape pair");
  m->add_option("--a", measures.a, "First shape")->required();
  m->add_option("--b", measures.b, "Second shape")->required();
  m->add_option("--method", measures.method, "closed, numeric or both")
      ->check(CLI::IsMember({"closed", "numeric", "both"}))
      ->capture_default_str();
  add_alpha_and_format(m, measures.common);
  add_root_options(m, measures.common);

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Estimate shapes from a one-column sample file");
  f->add_option("path", fit.path, "Sample file, one value in (0, 1) per line")->required();
  f->add_option("--method", fit.method, "mom or mle")->check(CLI::IsMember({"mom", "mle"}))->capture_default_str();
  f->add_option("--grad-tol", fit.grad_tol, "Stop when max |score| / n falls below this")->capture_default_str();
  f->add_option("--max-iters", fit.max_iters, "Newton iteration budget")->capture_default_str();
  f->add_option("--output-format", fit.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();

  PortfolioArgs portfolio;
  auto* p = app.add_subcommand("portfolio", "Fit and price an obligor CSV");
  p->add_option("path", portfolio.path, "Portfolio CSV")->required();
  p->add_option("--label", portfolio.label, "Period label (default: file name)");
  add_alpha_and_format(p, portfolio.common);
  add_root_options(p, portfolio.common);

  TablesArgs tables;
  auto* t = app.add_subcommand("tables", "Reference tables of risk measures");
  t->add_option("which", tables.which, "analytic or numeric")
      ->required()
      ->check(CLI::IsMember({"analytic", "numeric"}));
  add_alpha_and_format(t, tables.common);
  add_root_options(t, tables.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  return guarded(
      [&]() -> int {
        if (m->parsed()) {
          cmd_measures(measures, out);
          return kOk;
        }
        if (f->parsed()) return cmd_fit(fit, out, err);
        if (p->parsed()) {
          cmd_portfolio(portfolio, out);
          return kOk;
        }
        cmd_tables(tables, out);
        return kOk;
      },
      err);
}

}  // namespace bkrisk::cli
