#include "congamma/counting.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "congamma/error.hpp"
#include "congamma/sieve.hpp"
#include "congamma/specfun.hpp"

namespace congamma {

namespace {

constexpr double kLog10E = 0.4342944819032518;
constexpr std::uint32_t kTwinExplicitCutoff = 1000;

void require_at_least_one(const BigReal& x) {
  if (!x.is_finite()) throw DomainError("x must be finite", "x");
  if (x < 1L) throw DomainError("x must be >= 1", "x");
}

// Poisson(x) probability mass at k, e^{-x} x^k / k!.
BigReal poisson_pmf(const BigReal& x, std::uint64_t k, int digits) {
  BigReal lg(digits);
  BigReal kp1(static_cast<long>(k + 1), digits);
  mpfr_lngamma(lg.raw(), kp1.raw(), MPFR_RNDN);
  BigReal kk(static_cast<long>(k), digits);
  return exp(kk * log(x) - x - lg);
}

// P(k) = sum_p p^{-k} = sum_n mu(n)/n log zeta(nk), accurate to an absolute
// 2^{-k} 10^{-digits}.
BigReal prime_zeta(long k, int digits) {
  const int w = digits + static_cast<int>(std::ceil(0.31 * k)) + 3;
  BigReal sum(0L, w);
  BigReal z(w);
  const long n_max = static_cast<long>(std::ceil((digits + 2.0) / (k * 0.30102999566398))) + 1;
  for (long n = 1; n <= n_max; ++n) {
    const int mu = mobius(static_cast<std::uint64_t>(n));
    if (mu == 0) continue;
    mpfr_zeta_ui(z.raw(), static_cast<unsigned long>(n * k), MPFR_RNDN);
    z -= 1L;
    mpfr_log1p(z.raw(), z.raw(), MPFR_RNDN);
    z /= n;
    if (mu > 0) {
      sum += z;
    } else {
      sum -= z;
    }
  }
  return sum;
}

BigReal twin_constant_uncached(int digits) {
  const int w = digits + 10;
  const auto primes = small_primes(kTwinExplicitCutoff);
  BigReal prod = twin_constant_truncated(kTwinExplicitCutoff, w);

  // log prod_{p>Q} (1 - 1/(p-1)^2) = -sum_{k>=2} (2^k - 2)/k * sum_{p>Q} p^{-k}
  BigReal log_tail(0L, w);
  const double log10_q = std::log10(static_cast<double>(kTwinExplicitCutoff));
  for (long k = 2;; ++k) {
    BigReal head(0L, w + 3);
    for (std::uint32_t p : primes) head += pow(BigReal(static_cast<long>(p), w + 3), -k);
    const BigReal t = prime_zeta(k, w) - head;
    BigReal coeff = pow(BigReal(2L, w), k) - 2L;
    log_tail += coeff * t / k;
    // Remaining k: (2^k/k) * sum_{p>Q} p^{-k} <= (2^k/k) Q^{1-k}/(k-1), geometric in k.
    const double next = (k + 1) * 0.30102999566398 + (1.0 - (k + 1)) * log10_q - std::log10(static_cast<double>(k * (k + 1)));
    if (next < -(w + 3)) break;
  }
  return (prod * exp(-log_tail)).at_digits(digits);
}

}  // namespace

BigReal ScalingChoice::operator()(const BigReal& x) const {
  if (lambda) return lambda(x);
  return -log(x);
}

SeriesResult integer_count(double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("integer_count requires finite x > 0", "x");
  const int w = policy.working_digits(0.0);
  const BigReal X(x, w);
  SeriesResult result;
  result.input_x = x;
  result.precision_used = w;

  // P(n, x) = Pr[Poisson(x) >= n]. Terms far below the mean equal 1 to
  // working precision; they are added in bulk with a rigorous error bound.
  std::uint64_t n0 = 1;
  BigReal skip_bound(0L, w);  // bound on Pr[Poisson(x) <= n0 - 1]
  if (x > 50.0) {
    double c = std::sqrt(2.0 * std::log(10.0) * (w + std::log10(x) + 5.0));
    for (;; c += 2.0) {
      const double start = std::floor(x - c * std::sqrt(x));
      if (start < 2.0) {
        n0 = 1;
        skip_bound = BigReal(0L, w);
        break;
      }
      n0 = static_cast<std::uint64_t>(start);
      const std::uint64_t m = n0 - 1;
      skip_bound = poisson_pmf(X, m, w) / (1L - BigReal(static_cast<long>(m), w) / X);
      if (skip_bound * BigReal(4.0 * x, w) < BigReal(std::pow(10.0, -(w - 2.0)), w) * X) break;
    }
  }

  TruncationRule rule(policy, w);
  BigReal partial(static_cast<long>(n0 - 1), w);
  BigReal cdf(0L, w);  // Pr[Poisson <= n-1], less the skipped mass
  BigReal pk = poisson_pmf(X, n0 - 1, w);
  BigReal tail(w);
  for (std::uint64_t n = n0;; ++n) {
    cdf += pk;
    const BigReal term = 1L - cdf;
    partial += term;
    pk *= X;
    pk /= static_cast<long>(n);  // now p_n
    bool certified = false;
    if (static_cast<double>(n) + 2.0 > x) {
      const BigReal rho = X / BigReal(static_cast<long>(n + 2), w);
      const BigReal next = pk * X / BigReal(static_cast<long>(n + 1), w);
      const BigReal one_minus = 1L - rho;
      tail = next / (one_minus * one_minus);
      certified = tail <= abs(term);
    }
    if (rule.done(term, partial, certified)) {
      result.terms_used = rule.terms();
      const BigReal skipped_error = skip_bound * BigReal(static_cast<long>(n), w);
      result.tail_bound = (tail + skipped_error).at_digits(policy.digits);
      result.last_ratio = rule.last_ratio();
      break;
    }
  }
  result.value = partial.at_digits(policy.digits);
  return result;
}

BigReal twin_constant(const PrecisionPolicy& policy) {
  policy.validate();
  static std::mutex mu;
  static std::map<int, BigReal> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(policy.digits);
    if (it != memo.end()) return it->second;
  }
  BigReal value = twin_constant_uncached(policy.digits);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(policy.digits, value);
  return value;
}

BigReal twin_constant_truncated(std::uint32_t cutoff, int digits) {
  BigReal prod(1L, digits);
  for (std::uint32_t p : small_primes(cutoff)) {
    if (p == 2) continue;
    const long q = static_cast<long>(p) - 1;
    // 1 - 1/q^2 = (q-1)(q+1)/q^2
    prod *= BigReal((q - 1) * (q + 1), digits);
    prod /= BigReal(q * q, digits);
  }
  return prod;
}

BigReal twin_constant_euler(std::uint32_t cutoff, int digits) {
  if (cutoff < 3) throw DomainError("cutoff must be >= 3", "cutoff");
  const BigReal prod = twin_constant_truncated(cutoff, digits + 5);
  const BigReal e1 = exponential_integral_e1(log(BigReal(static_cast<long>(cutoff), digits + 5)));
  return (prod * exp(-e1)).at_digits(digits);
}

DoubleSpec double_constant(std::uint64_t i, const PrecisionPolicy& policy) {
  if (i < 1) throw DomainError("i must be >= 1", "i");
  const int w = policy.digits + 5;
  BigReal c = twin_constant(policy.with_digits(w));
  std::uint64_t m = i >> __builtin_ctzll(i);
  auto apply = [&](std::uint64_t p) {
    c *= BigReal(static_cast<long>(p - 1), w);
    c /= BigReal(static_cast<long>(p - 2), w);
  };
  for (std::uint64_t p = 3; p * p <= m; p += 2) {
    if (m % p == 0) {
      apply(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) apply(m);
  return DoubleSpec{i, 2 * i, c.at_digits(policy.digits)};
}

SeriesResult pi1_bar(const BigReal& x, const PrecisionPolicy& policy, const ScalingChoice& scaling) {
  policy.validate();
  require_at_least_one(x);
  SeriesResult result;
  result.input_x = x.to_double();

  const double lam_estimate = std::fabs(scaling(x.at_digits(std::max(x.digits(), 30))).to_double());
  // Cancellation in 1 - e^{-lambda} s_n(lambda) is absorbed by roughly
  // 2|lambda| log10 e extra digits.
  const int w = policy.working_digits(2.0 * lam_estimate * kLog10E + 2.0);
  result.precision_used = w;
  const BigReal lam = scaling(x.at_digits(w)).at_digits(w);
  if (lam.is_zero()) {
    result.value = BigReal(0L, policy.digits);
    result.tail_bound = BigReal(0L, policy.digits);
    return result;
  }
  const double lam_abs = std::fabs(lam.to_double());
  const BigReal e_neg = exp(-lam);
  TruncatedExp s(lam, w);
  TruncationRule rule(policy, w);
  BigReal sum(0L, w);
  for (long n = 1;; ++n) {
    s.advance_to(n);
    // gamma(n, lam)/n! = (1 - e^{-lam} s_n(lam)) / n
    BigReal term = (e_neg * s.sum() - 1L) / n;
    sum += term;
    // |gamma(n+1, lam)| <= |lam| |gamma(n, lam)| bounds the term ratio by |lam|/(n+1).
    if (rule.done(term, sum, lam_abs / (n + 1.0) <= 0.5)) break;
  }
  result.value = sum.at_digits(policy.digits);
  result.terms_used = rule.terms();
  result.tail_bound = rule.last_term_magnitude().at_digits(policy.digits);
  result.last_ratio = rule.last_ratio();
  return result;
}

SeriesResult pi1_bar(double x, const PrecisionPolicy& policy, const ScalingChoice& scaling) {
  if (!std::isfinite(x)) throw DomainError("x must be finite", "x");
  return pi1_bar(BigReal(x, policy.digits + 10), policy, scaling);
}

SeriesResult mobius_inverted_pi(double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (!std::isfinite(x) || !(x >= 2.0)) throw DomainError("mobius_inverted_pi requires x >= 2", "x");
  long n_max = 1;
  while (std::ldexp(1.0, static_cast<int>(n_max + 1)) <= x) ++n_max;

  const int w = policy.digits + 10;
  const BigReal X(x, w);
  const BigReal LX = log(X);
  SeriesResult result;
  result.input_x = x;
  BigReal sum(0L, w);
  BigReal tail(0L, w);
  for (long n = 1; n <= n_max; ++n) {
    const int mu = mobius(static_cast<std::uint64_t>(n));
    if (mu == 0) continue;
    const BigReal root = n == 1 ? X : exp(LX / n);
    const SeriesResult r = pi1_bar(root, policy);
    const BigReal contrib = r.value.at_digits(w) / n;
    if (mu > 0) {
      sum += contrib;
    } else {
      sum -= contrib;
    }
    tail += r.tail_bound.at_digits(w) / n;
    result.terms_used += r.terms_used;
    result.precision_used = std::max(result.precision_used, r.precision_used);
  }
  result.value = sum.at_digits(policy.digits);
  result.tail_bound = tail.at_digits(policy.digits);
  return result;
}

SeriesResult double_series(const BigReal& x, const PrecisionPolicy& policy) {
  policy.validate();
  require_at_least_one(x);
  SeriesResult result;
  result.input_x = x.to_double();
  const double lx = std::log10(std::max(1.0, x.to_double()));
  // Terms peak near x^3 while the sum is ~ x / log^2 x.
  const int w = policy.working_digits(2.0 * lx + 2.0);
  result.precision_used = w;
  if (x == 1L) {
    result.value = BigReal(0L, policy.digits);
    result.tail_bound = BigReal(0L, policy.digits);
    return result;
  }
  const BigReal L = log(x.at_digits(w));
  const double ld = L.to_double();
  PrecisionPolicy inner = policy.with_digits(w);
  inner.auto_raise = true;

  TruncationRule rule(policy, w);
  BigReal fact_sq(1L, w);
  BigReal sum(0L, w);
  const BigReal neg_l = -L;
  for (long n = 1;; ++n) {
    fact_sq *= n * n;
    BigReal term = lower_gamma(2 * n - 1, neg_l, inner) / fact_sq;
    if (n % 2 == 1) term = -term;
    sum += term;
    // |gamma(2n+1, -L)| <= L^2 |gamma(2n-1, -L)|
    if (rule.done(term, sum, ld * ld / ((n + 1.0) * (n + 1.0)) <= 0.5)) break;
  }
  result.value = sum.at_digits(policy.digits);
  result.terms_used = rule.terms();
  result.tail_bound = rule.last_term_magnitude().at_digits(policy.digits);
  result.last_ratio = rule.last_ratio();
  return result;
}

SeriesResult pi2i_bar(const BigReal& x, std::uint64_t i, const PrecisionPolicy& policy) {
  if (i < 1) throw DomainError("i must be >= 1", "i");
  require_at_least_one(x);
  SeriesResult r = double_series(x, policy);
  const int w = r.precision_used;
  const BigReal c = double_constant(i, policy.with_digits(w)).constant;
  r.value = (c * r.value.at_digits(w)).at_digits(policy.digits);
  r.tail_bound = (c * r.tail_bound.at_digits(w)).at_digits(policy.digits);
  r.validity_warning = !(x - 2L > BigReal(static_cast<long>(2 * i), x.digits()));
  return r;
}

SeriesResult pi2i_bar(double x, std::uint64_t i, const PrecisionPolicy& policy) {
  if (!std::isfinite(x)) throw DomainError("x must be finite", "x");
  return pi2i_bar(BigReal(x, policy.digits + 10), i, policy);
}

}  // namespace congamma
