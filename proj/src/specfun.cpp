#include "congamma/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "congamma/error.hpp"

namespace congamma {

namespace {

constexpr double kLn10 = 2.302585092994046;

BigReal factorial(long n, int digits) {
  BigReal f(1L, digits);
  mpfr_fac_ui(f.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
  return f;
}

void require_order(long n) {
  if (n < 1) throw DomainError("incomplete gamma order n must be >= 1", "n");
}

void require_finite(const BigReal& z, const char* name) {
  if (!z.is_finite()) throw DomainError(std::string(name) + " must be finite", name);
}

// ln sum_{k>=0} y^{n+k} / (k! (n+k)) evaluated in log space; y > 0.
double log_positive_gamma_series(long n, double y) {
  const double ly = std::log(y);
  double best = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  const long kmax = static_cast<long>(y + 20.0 * std::sqrt(y + 1.0) + 60.0);
  for (long k = 0; k <= kmax; ++k) {
    const double t = (n + k) * ly - std::lgamma(static_cast<double>(k) + 1.0) - std::log(static_cast<double>(n + k));
    if (t > best) {
      acc = acc * std::exp(best - t) + 1.0;
      best = t;
    } else {
      acc += std::exp(t - best);
    }
    if (k > y && t < best - 50.0) break;
  }
  return best + std::log(acc);
}

}  // namespace

TruncatedExp::TruncatedExp(const BigReal& z, int digits)
    : z_(z.at_digits(digits)), term_(1L, digits), sum_(0L, digits), max_term_(0L, digits) {}

void TruncatedExp::advance() {
  if (count_ > 0) {
    term_ *= z_;
    term_ /= count_;
  }
  sum_ += term_;
  if (abs(term_) > max_term_) max_term_ = abs(term_);
  ++count_;
}

double lower_gamma_cancellation(long n, double z) {
  if (z >= 0.0 || n < 1) return 0.0;
  const double y = -z;
  const double ly = std::log(y);
  // Largest summand of 1 - e^{y} s_n(-y): max(1, e^y max_{k<n} y^k/k!).
  const long kstar = std::min<long>(n - 1, static_cast<long>(std::floor(y)));
  const double lmax = std::max(0.0, y + kstar * ly - std::lgamma(static_cast<double>(kstar) + 1.0));
  // |gamma(n,-y)|/(n-1)! = sum_k y^{n+k}/(k!(n+k)) / (n-1)!.
  const double lres = log_positive_gamma_series(n, y) - std::lgamma(static_cast<double>(n));
  return std::max(0.0, (lmax - lres) / kLn10);
}

BigReal lower_gamma(long n, const BigReal& z, const PrecisionPolicy& policy) {
  require_order(n);
  require_finite(z, "z");
  policy.validate();
  if (z.is_zero()) return BigReal(0L, policy.digits);

  const double zd = z.to_double();
  if (z.sign() > 0) {
    const int w = policy.working_digits(0.0);
    const BigReal zw = z.at_digits(w);
    if (zd < static_cast<double>(n)) {
      // gamma(n,z) = e^{-z} z^n sum_k z^k / (n (n+1) ... (n+k)), all terms positive.
      BigReal term(1L, w);
      term /= n;
      BigReal sum = term;
      const BigReal eps(std::pow(10.0, -static_cast<double>(w)), w);
      for (long k = 1;; ++k) {
        term *= zw;
        term /= (n + k);
        sum += term;
        if (term < eps * sum) break;
        if (k > policy.max_terms + 10L * n) {
          throw PrecisionExhausted("incomplete gamma series did not converge", policy.max_terms * 2, "max_terms");
        }
      }
      BigReal out = exp(-zw) * pow(zw, n) * sum;
      return out.at_digits(policy.digits);
    }
    TruncatedExp s(zw, w);
    s.advance_to(n);
    BigReal out = factorial(n - 1, w) * (1L - exp(-zw) * s.sum());
    return out.at_digits(policy.digits);
  }

  const int w = policy.working_digits(lower_gamma_cancellation(n, zd));
  const BigReal zw = z.at_digits(w);
  TruncatedExp s(zw, w);
  s.advance_to(n);
  BigReal out = factorial(n - 1, w) * (1L - exp(-zw) * s.sum());
  return out.at_digits(policy.digits);
}

BigReal lower_gamma(long n, double z, const PrecisionPolicy& policy) {
  if (!std::isfinite(z)) throw DomainError("z must be finite", "z");
  return lower_gamma(n, BigReal(z, policy.digits), policy);
}

BigReal regularized_p(long n, const BigReal& z, const PrecisionPolicy& policy) {
  require_order(n);
  const int w = policy.digits + 5;
  BigReal g = lower_gamma(n, z, policy.with_digits(w));
  return (g / factorial(n - 1, w)).at_digits(policy.digits);
}

BigReal regularized_p(long n, double z, const PrecisionPolicy& policy) {
  if (!std::isfinite(z)) throw DomainError("z must be finite", "z");
  return regularized_p(n, BigReal(z, policy.digits + 5), policy);
}

int mobius(std::uint64_t n) {
  if (n == 0) throw DomainError("mobius is defined for n >= 1", "n");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

BigReal zeta_int(long k, const PrecisionPolicy& policy) {
  if (k < 2) throw DomainError("zeta_int requires k >= 2", "k");
  policy.validate();
  BigReal out(policy.digits + 10);
  mpfr_zeta_ui(out.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
  return out.at_digits(policy.digits);
}

BigReal log_integral(const BigReal& x, const PrecisionPolicy& policy) {
  policy.validate();
  if (!x.is_finite()) throw DomainError("x must be finite", "x");
  if (x <= BigReal(1.0 + 1e-12, x.digits())) {
    throw DomainError("log_integral requires x > 1 (values at or near 1 are refused)", "x");
  }
  const double ld = std::log(x.to_double());
  const int w = policy.working_digits(std::log10(ld + 1.0) + 2.0);
  const BigReal L = log(x.at_digits(w));

  // li(x) = gamma + ln ln x + sqrt(x) sum_n (-1)^{n-1} L^n / (n! 2^{n-1}) sum_{k<=(n-1)/2} 1/(2k+1)
  TruncationRule rule(policy, w);
  BigReal t = L;
  BigReal odd_harmonic(1L, w);
  BigReal sum = t;
  long n = 1;
  bool stop = rule.done(t, sum, ld / (2.0 * (n + 1)) <= 0.5);
  while (!stop) {
    ++n;
    t *= L;
    t /= -2L * n;
    if (n % 2 == 1) odd_harmonic += BigReal(1L, w) / BigReal(n, w);
    const BigReal term = t * odd_harmonic;
    sum += term;
    stop = rule.done(term, sum, ld / (2.0 * (n + 1)) <= 0.5);
  }
  BigReal out = BigReal::euler_gamma(w) + log(L) + sqrt(x.at_digits(w)) * sum;
  return out.at_digits(policy.digits);
}

BigReal log_integral(double x, const PrecisionPolicy& policy) {
  if (!std::isfinite(x)) throw DomainError("x must be finite", "x");
  return log_integral(BigReal(x, policy.digits + 10), policy);
}

SeriesResult riemann_r(double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("riemann_r requires finite x >= 1", "x");
  const int w = policy.working_digits(0.0);
  SeriesResult result;
  result.input_x = x;
  result.precision_used = w;
  if (x == 1.0) {
    result.value = BigReal(1L, policy.digits);
    result.tail_bound = BigReal(0L, policy.digits);
    return result;
  }
  const double ld = std::log(x);
  const BigReal L = log(BigReal(x, w));
  TruncationRule rule(policy, w);
  BigReal power(1L, w);  // L^k / k!
  BigReal sum(1L, w);
  BigReal zeta(w);
  for (long k = 1;; ++k) {
    power *= L;
    power /= k;
    mpfr_zeta_ui(zeta.raw(), static_cast<unsigned long>(k + 1), MPFR_RNDN);
    const BigReal term = power / (zeta * k);
    sum += term;
    if (rule.done(term, sum, ld / (k + 1.0) <= 0.5)) break;
  }
  result.value = sum.at_digits(policy.digits);
  result.terms_used = rule.terms();
  result.tail_bound = rule.last_term_magnitude().at_digits(policy.digits);
  result.last_ratio = rule.last_ratio();
  return result;
}

BigReal exponential_integral_e1(const BigReal& u) {
  if (!(u > 0L)) throw DomainError("E1 requires u > 0", "u");
  // MPFR >= 4: eint(-u) = -E1(u).
  BigReal out(u.digits());
  const BigReal neg = -u;
  mpfr_eint(out.raw(), neg.raw(), MPFR_RNDN);
  return -out;
}

}  // namespace congamma
