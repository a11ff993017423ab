#include "congamma/goldbach.hpp"

#include <cmath>

#include "congamma/counting.hpp"
#include "congamma/error.hpp"
#include "congamma/sieve.hpp"
#include "congamma/specfun.hpp"

namespace congamma {

namespace {

PrecisionPolicy inner_policy(const PrecisionPolicy& policy, int digits) {
  PrecisionPolicy p = policy.with_digits(digits);
  p.auto_raise = true;
  return p;
}

void require_integer_valued(double x, double min, const char* what) {
  if (!std::isfinite(x) || x < min) {
    throw DomainError(std::string(what) + " requires finite x >= " + std::to_string(static_cast<long>(min)), "x");
  }
}

}  // namespace

std::string to_string(StraddleMode mode) {
  switch (mode) {
    case StraddleMode::direct:
      return "direct";
    case StraddleMode::factored:
      return "factored";
    case StraddleMode::paper_lower_bound:
      return "paper_lower_bound";
  }
  return "factored";
}

StraddleMode parse_straddle_mode(const std::string& name) {
  if (name == "direct") return StraddleMode::direct;
  if (name == "factored") return StraddleMode::factored;
  if (name == "paper_lower_bound") return StraddleMode::paper_lower_bound;
  throw ValidationError("unknown mode '" + name + "' (direct|factored|paper_lower_bound)", "mode");
}

std::pair<BigReal, BigReal> delta_pm(long n, double x, const PrecisionPolicy& policy) {
  if (n < 1) throw DomainError("n must be >= 1", "n");
  require_integer_valued(x, 2.0, "delta_pm");
  policy.validate();
  // The three gamma values agree in their leading ~log10(x) digits.
  const int w = policy.working_digits(std::log10(x) + 2.0);
  const PrecisionPolicy inner = inner_policy(policy, w);
  const BigReal X(x, w);
  const long m = 2 * n - 1;
  const BigReal g_mid = lower_gamma(m, -log(X), inner);
  const BigReal g_up = lower_gamma(m, -log(X + 1L), inner);
  const BigReal g_lo = lower_gamma(m, -log(X - 1L), inner);
  return {(g_up - g_mid).at_digits(policy.digits), (g_mid - g_lo).at_digits(policy.digits)};
}

SeriesResult straddle_series(double x, const PrecisionPolicy& policy) {
  require_integer_valued(x, 2.0, "straddle_series");
  policy.validate();
  SeriesResult result;
  result.input_x = x;
  // Terms reach ~x^2 against a sum ~1/log^2 x, plus the Delta cancellation.
  const int w = policy.working_digits(3.0 * std::log10(x) + 2.0);
  result.precision_used = w;
  const PrecisionPolicy inner = inner_policy(policy, w);
  const BigReal X(x, w);
  const BigReal neg_up = -log(X + 1L);
  const BigReal neg_lo = -log(X - 1L);
  const double l_up = std::log(x + 1.0);

  TruncationRule rule(policy, w);
  BigReal fact_sq(1L, w);
  BigReal sum(0L, w);
  for (long n = 1;; ++n) {
    fact_sq *= n * n;
    const long m = 2 * n - 1;
    BigReal term = (lower_gamma(m, neg_up, inner) - lower_gamma(m, neg_lo, inner)) / fact_sq;
    if (n % 2 == 1) term = -term;
    sum += term;
    // Delta sums are integrals of u^{2n-2} e^u over [log(x-1), log(x+1)],
    // so consecutive ratios are bounded by log^2(x+1)/(n+1)^2.
    if (rule.done(term, sum, l_up * l_up / ((n + 1.0) * (n + 1.0)) <= 0.5)) break;
  }
  result.value = sum.at_digits(policy.digits);
  result.terms_used = rule.terms();
  result.tail_bound = rule.last_term_magnitude().at_digits(policy.digits);
  result.last_ratio = rule.last_ratio();
  return result;
}

BigReal straddle_density(std::uint64_t i, double x, const PrecisionPolicy& policy) {
  if (i < 1) throw DomainError("i must be >= 1", "i");
  require_integer_valued(x, 3.0, "straddle_density");
  if (2.0 * static_cast<double>(i) > 2.0 * x - 2.0) throw DomainError("straddle_density requires 2i <= 2x - 2", "i");
  const int w = policy.digits + 5;
  const PrecisionPolicy p = policy.with_digits(w);
  const SeriesResult h = straddle_series(x, p);
  const BigReal c = double_constant(i, p).constant;
  return (c * h.value / BigReal(static_cast<long>(2 * i), w)).at_digits(policy.digits);
}

StraddleReport straddle_expectation(std::uint64_t x, const PrecisionPolicy& policy, StraddleMode mode,
                                    const StraddleOptions& options) {
  policy.validate();
  if (x < 4) throw DomainError("straddle_expectation requires x >= 4", "x");
  StraddleReport report;
  report.x = x;
  report.mode = mode;
  report.i_max = x - 3;
  const int w = policy.digits + 5;
  const PrecisionPolicy p = policy.with_digits(w);
  const double xd = static_cast<double>(x);

  if (mode == StraddleMode::direct) {
    if (x > options.direct_ceiling) {
      throw RangeError("direct mode is limited to x <= " + std::to_string(options.direct_ceiling), "x");
    }
    BigReal s(0L, w);
    BigReal c2i_sum(0L, w);
    BigReal rel_tail(0L, w);
    for (std::uint64_t i = 1; i <= x - 3; ++i) {
      const SeriesResult g = pi2i_bar(2.0 * xd, i, p);
      const BigReal d = straddle_density(i, xd, p);
      s += g.value * d;
      const BigReal c = double_constant(i, p).constant;
      c2i_sum += c * c / BigReal(static_cast<long>(2 * i), w);
      if (i == 1) {
        rel_tail = g.tail_bound / abs(g.value);
        report.precision_used = g.precision_used;
      }
    }
    const SeriesResult h = straddle_series(xd, p);
    rel_tail += h.tail_bound / abs(h.value);
    report.precision_used = std::max(report.precision_used, h.precision_used);
    report.S = s.at_digits(policy.digits);
    report.c2i_sum_used = c2i_sum.at_digits(policy.digits);
    report.tail_bound = (abs(s) * rel_tail).at_digits(policy.digits);
  } else {
    const SeriesResult g = double_series(BigReal(2.0 * xd, w), p);
    const SeriesResult h = straddle_series(xd, p);
    BigReal sum;
    if (mode == StraddleMode::factored) {
      sum = c2i_square_sum(x - 3, p, options.sweep);
    } else {
      // Sum over i of C_{2i}^2/(2i) replaced by C_2/2 * 1.
      sum = twin_constant(p) / 2L;
    }
    const BigReal s = g.value * h.value * sum;
    report.S = s.at_digits(policy.digits);
    report.c2i_sum_used = sum.at_digits(policy.digits);
    BigReal rel = g.tail_bound / abs(g.value) + h.tail_bound / abs(h.value);
    if (mode == StraddleMode::factored) rel += BigReal(kC2iSweepRelError, w);
    report.tail_bound = (abs(s) * rel).at_digits(policy.digits);
    report.precision_used = std::max(g.precision_used, h.precision_used);
  }
  report.log10_failure = (-report.S.at_digits(w) * BigReal::log10_e(w)).at_digits(policy.digits);
  return report;
}

std::pair<BigReal, BigReal> failure_probability(const StraddleReport& report) {
  const int d = std::max(report.S.digits(), BigReal::kMinDigits);
  BigReal prob = 1L - exp(-report.S);
  if (prob < 0L) prob = BigReal(0L, d);
  if (prob > 1L) prob = BigReal(1L, d);
  return {prob, -report.S * BigReal::log10_e(d)};
}

BigReal cramer_gap(std::uint64_t p, const PrecisionPolicy& policy) {
  if (p < 3) throw DomainError("cramer_gap requires p >= 3", "p");
  const BigReal density = straddle_density(1, static_cast<double>(p) + 1.0, policy);
  if (!(density > 0L)) throw DomainError("straddle density is not positive at p + 1", "p");
  return BigReal(1L, policy.digits) / density;
}

}  // namespace congamma
