#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "congamma/bigreal.hpp"
#include "congamma/policy.hpp"
#include "congamma/sieve.hpp"

namespace congamma {

enum class StraddleMode { direct, factored, paper_lower_bound };

std::string to_string(StraddleMode mode);
/// Throws ValidationError (parameter "mode") on an unknown name.
StraddleMode parse_straddle_mode(const std::string& name);

struct StraddleReport {
  std::uint64_t x = 0;
  BigReal S;
  StraddleMode mode = StraddleMode::factored;
  /// The i-sum actually multiplied in: sum_{i<=x-3} C_{2i}^2/(2i), or C_2/2
  /// for paper_lower_bound. Empty meaning for direct mode (set to the
  /// equivalent sum recovered from S).
  BigReal c2i_sum_used;
  /// log10 e^{-S} = -S log10 e.
  BigReal log10_failure;
  /// Upper limit of the i-sum (x - 3).
  std::uint64_t i_max = 0;
  BigReal tail_bound;
  int precision_used = 0;
};

struct StraddleOptions {
  /// Largest x accepted by direct mode.
  std::uint64_t direct_ceiling = 20000;
  C2iSweepOptions sweep;
};

/// (Delta_+, Delta_-) with
///   Delta_+ = gamma(2n-1, -log(x+1)) - gamma(2n-1, -log x)
///   Delta_- = gamma(2n-1, -log x) - gamma(2n-1, -log(x-1)).
std::pair<BigReal, BigReal> delta_pm(long n, double x, const PrecisionPolicy& policy);

/// H(x) = sum_n (-1)^n (Delta_+ + Delta_-)/(n!)^2.
SeriesResult straddle_series(double x, const PrecisionPolicy& policy);

/// P_i(x) = C_{2i}/(2i) H(x).
BigReal straddle_density(std::uint64_t i, double x, const PrecisionPolicy& policy);

/// S(x) = sum_{i=1}^{x-3} pi2i_bar(2x) P_i(x).
StraddleReport straddle_expectation(std::uint64_t x, const PrecisionPolicy& policy, StraddleMode mode,
                                    const StraddleOptions& options = {});

/// (1 - e^{-S} clamped to [0, 1], log10 e^{-S}).
std::pair<BigReal, BigReal> failure_probability(const StraddleReport& report);

/// 1/P_1(p + 1).
BigReal cramer_gap(std::uint64_t p, const PrecisionPolicy& policy);

}  // namespace congamma
