#pragma once

#include <cstdint>
#include <functional>

#include "congamma/bigreal.hpp"
#include "congamma/policy.hpp"

namespace congamma {

/// Scaling lambda(x) of the counting process. Empty means lambda(x) = -log x.
struct ScalingChoice {
  /// Receives x at working precision, returns lambda(x) at that precision.
  std::function<BigReal(const BigReal& x)> lambda;

  BigReal operator()(const BigReal& x) const;
};

/// A prime double (p, p + 2i) and its Hardy-Littlewood constant.
struct DoubleSpec {
  std::uint64_t i = 0;
  std::uint64_t gap = 0;
  BigReal constant;
};

/// N(x) = sum_{n>=1} P(n, x); equals x.
SeriesResult integer_count(double x, const PrecisionPolicy& policy);

/// C_2 = prod_{p>2} (1 - 1/(p-1)^2). Explicit product over p <= 1000, the
/// remaining primes through the prime zeta function.
BigReal twin_constant(const PrecisionPolicy& policy);

/// Product over odd primes p <= cutoff, no tail correction. Always > C_2.
BigReal twin_constant_truncated(std::uint32_t cutoff, int digits);

/// Product over odd primes p <= cutoff times exp(-E1(log cutoff)), the
/// log-tail estimate sum_{p>cutoff} 1/p^2 ~ E1(log cutoff).
BigReal twin_constant_euler(std::uint32_t cutoff, int digits);

/// C_{2i} = C_2 prod_{odd p | i} (p-1)/(p-2).
DoubleSpec double_constant(std::uint64_t i, const PrecisionPolicy& policy);

/// Average prime counting function -sum_n gamma(n, lambda(x))/n!.
SeriesResult pi1_bar(double x, const PrecisionPolicy& policy, const ScalingChoice& scaling = {});
SeriesResult pi1_bar(const BigReal& x, const PrecisionPolicy& policy, const ScalingChoice& scaling = {});

/// sum_{n <= log2 x} mu(n)/n pi1_bar(x^{1/n}).
SeriesResult mobius_inverted_pi(double x, const PrecisionPolicy& policy);

/// sum_{n>=1} (-1)^n gamma(2n-1, -log x)/(n!)^2, the i-independent part of
/// pi2i_bar.
SeriesResult double_series(const BigReal& x, const PrecisionPolicy& policy);

/// C_{2i} * double_series(x). validity_warning is set when x - 2 <= 2i.
SeriesResult pi2i_bar(double x, std::uint64_t i, const PrecisionPolicy& policy);
SeriesResult pi2i_bar(const BigReal& x, std::uint64_t i, const PrecisionPolicy& policy);

}  // namespace congamma
