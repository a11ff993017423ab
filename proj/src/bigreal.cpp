#include "congamma/bigreal.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <utility>

#include "congamma/error.hpp"

namespace congamma {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

int clamp_digits(int digits) { return std::max(digits, BigReal::kMinDigits); }

}  // namespace

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(clamp_digits(digits) * 3.321928094887362)) + 8;
}

BigReal::BigReal(int digits) : digits_(clamp_digits(digits)) {
  mpfr_init2(value_, bits_for_digits(digits_));
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, int digits) : BigReal(digits) { mpfr_set_si(value_, value, kRnd); }

BigReal::BigReal(double value, int digits) : BigReal(digits) { mpfr_set_d(value_, value, kRnd); }

BigReal BigReal::parse(std::string_view text, int digits) {
  static const std::regex kNumber(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
  std::string s(text);
  if (!std::regex_match(s, kNumber)) {
    throw ValidationError("not a decimal number: '" + s + "'", "value");
  }
  BigReal out(digits);
  mpfr_set_str(out.value_, s.c_str(), 10, kRnd);
  return out;
}

BigReal BigReal::pi(int digits) {
  BigReal out(digits);
  mpfr_const_pi(out.value_, kRnd);
  return out;
}

BigReal BigReal::euler_gamma(int digits) {
  BigReal out(digits);
  mpfr_const_euler(out.value_, kRnd);
  return out;
}

BigReal BigReal::log10_e(int digits) {
  BigReal out(digits);
  mpfr_set_ui(out.value_, 1, kRnd);
  mpfr_exp(out.value_, out.value_, kRnd);
  mpfr_log10(out.value_, out.value_, kRnd);
  return out;
}

BigReal::BigReal(const BigReal& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept : digits_(other.digits_) {
  // Leave `other` as a valid zero at minimum precision.
  mpfr_init2(value_, bits_for_digits(kMinDigits));
  mpfr_swap(value_, other.value_);
  mpfr_set_zero(other.value_, 1);
  other.digits_ = kMinDigits;
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, kRnd);
    digits_ = other.digits_;
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
    std::swap(digits_, other.digits_);
  }
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::at_digits(int digits) const {
  BigReal out(digits);
  mpfr_set(out.value_, value_, kRnd);
  return out;
}

std::string BigReal::str(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  const int n = digits > 0 ? digits : digits_;
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(n), value_, kRnd);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string out;
  if (mant.front() == '-') {
    out.push_back('-');
    mant.erase(0, 1);
  }
  out.push_back(mant[0]);
  if (mant.size() > 1) {
    out.push_back('.');
    out.append(mant, 1);
  }
  const long e = static_cast<long>(exp10) - 1;
  out.push_back('e');
  out.push_back(e < 0 ? '-' : '+');
  const std::string ed = std::to_string(e < 0 ? -e : e);
  if (ed.size() < 2) out.push_back('0');
  out += ed;
  return out;
}

double BigReal::to_double() const { return mpfr_get_d(value_, kRnd); }

long BigReal::to_long_floor() const { return mpfr_get_si(value_, MPFR_RNDD); }

int BigReal::sign() const { return mpfr_sgn(value_); }

bool BigReal::is_finite() const { return mpfr_number_p(value_) != 0; }

long BigReal::exponent10() const {
  if (mpfr_zero_p(value_)) return 0;
  // mpfr exponent is base 2: |x| in [2^(e-1), 2^e).
  const double e2 = static_cast<double>(mpfr_get_exp(value_));
  return static_cast<long>(std::floor((e2 - 1.0) * 0.3010299956639812));
}

void BigReal::widen_to(int digits) {
  if (digits > digits_) {
    mpfr_prec_round(value_, bits_for_digits(digits), kRnd);
    digits_ = digits;
  }
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  widen_to(rhs.digits_);
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  widen_to(rhs.digits_);
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  widen_to(rhs.digits_);
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  widen_to(rhs.digits_);
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal out(*this);
  mpfr_neg(out.value_, out.value_, kRnd);
  return out;
}

BigReal operator+(BigReal lhs, const BigReal& rhs) { return lhs += rhs; }
BigReal operator-(BigReal lhs, const BigReal& rhs) { return lhs -= rhs; }
BigReal operator*(BigReal lhs, const BigReal& rhs) { return lhs *= rhs; }
BigReal operator/(BigReal lhs, const BigReal& rhs) { return lhs /= rhs; }

BigReal operator-(long lhs, const BigReal& rhs) {
  BigReal out(rhs.digits_);
  mpfr_si_sub(out.value_, lhs, rhs.value_, kRnd);
  return out;
}

bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }

std::partial_ordering operator<=>(const BigReal& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigReal abs(const BigReal& x) {
  BigReal out(x);
  mpfr_abs(out.value_, out.value_, kRnd);
  return out;
}

BigReal exp(const BigReal& x) {
  BigReal out(x.digits_);
  mpfr_exp(out.value_, x.value_, kRnd);
  return out;
}

BigReal log(const BigReal& x) {
  BigReal out(x.digits_);
  mpfr_log(out.value_, x.value_, kRnd);
  return out;
}

BigReal log10(const BigReal& x) {
  BigReal out(x.digits_);
  mpfr_log10(out.value_, x.value_, kRnd);
  return out;
}

BigReal sqrt(const BigReal& x) {
  BigReal out(x.digits_);
  mpfr_sqrt(out.value_, x.value_, kRnd);
  return out;
}

BigReal pow(const BigReal& x, long n) {
  BigReal out(x.digits_);
  mpfr_pow_si(out.value_, x.value_, n, kRnd);
  return out;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal out(std::max(x.digits_, y.digits_));
  mpfr_pow(out.value_, x.value_, y.value_, kRnd);
  return out;
}

BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }

}  // namespace congamma
