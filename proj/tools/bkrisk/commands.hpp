#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bkrisk/distribution.hpp"
#include "bkrisk/risk.hpp"

namespace bkrisk::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kInconsistency = 3, kNumericalFailure = 4 };

/// Environment variable that replaces the default confidence level; an explicit --alpha wins.
inline constexpr const char* kAlphaEnv = "BKRISK_ALPHA";

/// Runs one command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ShapedReport {
  double a;
  double b;
  risk::RiskReport report;
};

std::string risk_report_to_json(const ShapedReport& r);
/// Throws DomainError on malformed input.
ShapedReport risk_report_from_json(const std::string& text);

enum class TableKind { analytic, numeric };

/// The (a, b) grid printed by `tables`.
std::vector<std::pair<double, double>> table_grid(TableKind kind);

/// Evaluates every grid row: closed forms for `analytic`, the numeric root and
/// cross-checked CVaR for `numeric`.
std::vector<ShapedReport> compute_table(TableKind kind, ConfidenceLevel alpha, const risk::RootSolveConfig& cfg = {});

}  // namespace bkrisk::cli
