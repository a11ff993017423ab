#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "congamma/config.hpp"

namespace congamma {

/// Column names plus string-valued rows; every number is already a decimal
/// string at full working precision.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
  std::string json() const;
};

/// Evaluates the configured command over its grid. Throws congamma errors.
Report build_report(const ExperimentConfig& config);

/// Exit status for an exception escaping build_report: 2 validation,
/// 3 precision exhaustion (digits or max_terms), 1 anything else.
int exit_code_for(const std::exception& e);

/// Human-readable error line carrying the parameter and, for precision
/// exhaustion, the suggested value.
std::string describe_error(const std::exception& e);

/// Runs a config end to end: report to `out`, diagnostics to `err`.
int run(const ExperimentConfig& config, const std::function<void(std::string_view)>& out,
        const std::function<void(std::string_view)>& err);

}  // namespace congamma
