#pragma once

#include <cstdint>

#include "congamma/bigreal.hpp"
#include "congamma/policy.hpp"

namespace congamma {

/// Partial sums s_m(z) = sum_{k<m} z^k/k!, advanced one term at a time.
/// The counting series share these across consecutive orders n.
class TruncatedExp {
 public:
  TruncatedExp(const BigReal& z, int digits);

  /// Number of terms currently summed (m).
  long count() const { return count_; }
  const BigReal& sum() const { return sum_; }
  /// Largest |z^k/k!| seen so far.
  const BigReal& max_term() const { return max_term_; }
  /// Add the next term z^m/m!.
  void advance();
  void advance_to(long m) {
    while (count_ < m) advance();
  }

 private:
  BigReal z_;
  BigReal term_;
  BigReal sum_;
  BigReal max_term_;
  long count_ = 0;
};

/// Decimal digits lost to cancellation when forming 1 - e^{-z} s_n(z) for
/// z <= 0, estimated from the largest summand against the smallest possible
/// result |gamma(n, z)|/(n-1)! >= |z|^n/n!.
double lower_gamma_cancellation(long n, double z);

/// gamma(n, z) = (n-1)! (1 - e^{-z} sum_{k<n} z^k/k!) for integer n >= 1 and
/// any finite real z. Negative z is evaluated at raised working precision.
BigReal lower_gamma(long n, const BigReal& z, const PrecisionPolicy& policy);
BigReal lower_gamma(long n, double z, const PrecisionPolicy& policy);

/// P(n, z) = gamma(n, z)/Gamma(n).
BigReal regularized_p(long n, const BigReal& z, const PrecisionPolicy& policy);
BigReal regularized_p(long n, double z, const PrecisionPolicy& policy);

/// Moebius function by trial-division factorisation.
int mobius(std::uint64_t n);

/// zeta(k) for integer k >= 2.
BigReal zeta_int(long k, const PrecisionPolicy& policy);

/// Principal-value logarithmic integral li(x) for x > 1 (Ramanujan's series).
BigReal log_integral(const BigReal& x, const PrecisionPolicy& policy);
BigReal log_integral(double x, const PrecisionPolicy& policy);

/// Riemann's R(x) via Gram's series 1 + sum_k (log x)^k / (k k! zeta(k+1)).
SeriesResult riemann_r(double x, const PrecisionPolicy& policy);

/// E1(u) = int_u^inf e^{-t}/t dt for u > 0.
BigReal exponential_integral_e1(const BigReal& u);

}  // namespace congamma
