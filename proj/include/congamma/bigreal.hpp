#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <string>
#include <string_view>

namespace congamma {

/// Arbitrary-precision real carrying its working precision in decimal digits.
///
/// Arithmetic between two values yields a value at the larger of the two
/// precisions. Instances are plain values: copyable, movable, no shared state.
class BigReal {
 public:
  static constexpr int kMinDigits = 16;

  explicit BigReal(int digits = kMinDigits);
  BigReal(long value, int digits);
  BigReal(double value, int digits);

  /// Parses `[sign] digits [. digits] [e|E [sign] digits]`. Throws
  /// ValidationError on anything else.
  static BigReal parse(std::string_view text, int digits);

  static BigReal pi(int digits);
  static BigReal euler_gamma(int digits);
  static BigReal log10_e(int digits);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  int digits() const noexcept { return digits_; }

  /// Copy rounded (or widened) to `digits`.
  BigReal at_digits(int digits) const;

  /// Scientific decimal string with `digits` significant digits (0 = own
  /// precision).
  std::string str(int digits = 0) const;
  double to_double() const;
  long to_long_floor() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_finite() const;
  /// floor(log10 |x|) style exponent; meaningless for zero.
  long exponent10() const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator+=(long rhs);
  BigReal& operator-=(long rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(long rhs);
  BigReal operator-() const;

  friend BigReal operator+(BigReal lhs, const BigReal& rhs);
  friend BigReal operator-(BigReal lhs, const BigReal& rhs);
  friend BigReal operator*(BigReal lhs, const BigReal& rhs);
  friend BigReal operator/(BigReal lhs, const BigReal& rhs);
  friend BigReal operator+(BigReal lhs, long rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, long rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, long rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, long rhs) { return lhs /= rhs; }
  friend BigReal operator-(long lhs, const BigReal& rhs);

  friend bool operator==(const BigReal& a, const BigReal& b);
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b);
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

  friend BigReal abs(const BigReal& x);
  friend BigReal exp(const BigReal& x);
  friend BigReal log(const BigReal& x);
  friend BigReal log10(const BigReal& x);
  friend BigReal sqrt(const BigReal& x);
  friend BigReal pow(const BigReal& x, long n);
  friend BigReal pow(const BigReal& x, const BigReal& y);
  friend BigReal max(const BigReal& a, const BigReal& b);

  mpfr_srcptr raw() const noexcept { return value_; }
  mpfr_ptr raw() noexcept { return value_; }

 private:
  void widen_to(int digits);

  mpfr_t value_;
  int digits_;
};

/// Binary precision (bits) that holds `digits` decimal digits plus a small
/// rounding margin.
mpfr_prec_t bits_for_digits(int digits);

}  // namespace congamma
