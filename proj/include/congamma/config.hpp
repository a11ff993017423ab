#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace congamma {

/// One experiment: a command, its grid and every numeric knob. Serialises to
/// `key=value` lines; parse(serialize()) reproduces the config exactly.
struct ExperimentConfig {
  std::string command = "identity";
  /// Grid: `a:b:log10[:per_decade]`, `a:b:lin:step`, or `v1,v2,...`.
  std::string x = "10";
  std::uint64_t i = 1;
  int digits = 50;
  long max_terms = 100000;
  double tail_tol = 1e-12;
  bool auto_raise = true;
  std::string mode = "factored";
  /// none | sieve | riemann
  std::string compare = "none";
  std::string format = "csv";
  unsigned threads = 1;
  std::string cache_path;
  std::string potential_path;
  /// Energy grid (same syntax as x).
  std::string energy = "2";
  double v0 = 1.0;
  double x_a = -1.0;
  double x_b = 1.0;
  int depth = 40;
  double width = 1.0;
  /// "inf" or a positive number.
  std::string well_depth = "inf";
  double emin = 0.0;
  double emax = 50.0;
  double tol = 1e-12;

  static const std::vector<std::string>& keys();
  static const std::vector<std::string>& commands();

  /// Set one field from its text form. Throws ValidationError naming the key.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  std::string serialize() const;
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  /// Cross-field checks (known command, grids parse, policy limits).
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Expands a grid description. Throws ValidationError with `parameter` on bad input.
std::vector<double> parse_grid(std::string_view grid, const std::string& parameter);

/// Shortest text that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace congamma
