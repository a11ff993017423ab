#include "congamma/policy.hpp"

#include <cmath>

#include "congamma/error.hpp"

namespace congamma {

namespace {

constexpr int kGuardDigits = 10;

// Digits a result must keep after cancellation to honour tail_tol.
int surviving_digits_needed(double tail_tol) {
  return static_cast<int>(std::ceil(-std::log10(tail_tol))) + 3;
}

}  // namespace

void PrecisionPolicy::validate() const {
  if (digits < BigReal::kMinDigits) {
    throw ValidationError("digits must be >= " + std::to_string(BigReal::kMinDigits), "digits");
  }
  if (digits > kMaxWorkingDigits) {
    throw ValidationError("digits must be <= " + std::to_string(kMaxWorkingDigits), "digits");
  }
  if (max_terms < 1) throw ValidationError("max_terms must be >= 1", "max_terms");
  if (!(tail_tol > 0.0) || !std::isfinite(tail_tol)) {
    throw ValidationError("tail_tol must be a positive finite number", "tail_tol");
  }
}

long PrecisionPolicy::sufficient_digits(double cancellation_digits) const {
  const double c = std::max(0.0, cancellation_digits);
  return static_cast<long>(std::ceil(c)) + surviving_digits_needed(tail_tol) + kGuardDigits;
}

int PrecisionPolicy::working_digits(double cancellation_digits) const {
  const double c = std::max(0.0, cancellation_digits);
  if (!auto_raise) {
    if (digits - c < surviving_digits_needed(tail_tol)) {
      throw PrecisionExhausted("cancellation of ~" + std::to_string(static_cast<long>(std::ceil(c))) +
                                   " digits exceeds digits=" + std::to_string(digits),
                               sufficient_digits(c));
    }
    return digits;
  }
  const double w = digits + std::ceil(c) + kGuardDigits;
  if (w > kMaxWorkingDigits) {
    throw PrecisionExhausted("required working precision exceeds the ceiling of " +
                                 std::to_string(kMaxWorkingDigits) + " digits",
                             static_cast<long>(w));
  }
  return static_cast<int>(w);
}

TruncationRule::TruncationRule(const PrecisionPolicy& policy, int working_digits)
    : policy_(policy), tol_(policy.tail_tol, working_digits), last_abs_(working_digits) {}

bool TruncationRule::done(const BigReal& term, const BigReal& partial, bool ratio_certified) {
  ++terms_;
  BigReal a = abs(term);
  if (!last_abs_.is_zero() && !a.is_zero()) {
    last_ratio_ = (a / last_abs_).to_double();
  } else {
    last_ratio_ = a.is_zero() ? 0.0 : last_ratio_;
  }
  last_abs_ = std::move(a);

  BigReal scale = abs(partial);
  if (scale < 1L) scale = BigReal(1L, scale.digits());
  if (last_abs_ < tol_ * scale) {
    ++small_run_;
  } else {
    small_run_ = 0;
  }
  if (small_run_ >= 3 && ratio_certified) return true;
  if (terms_ >= policy_.max_terms) {
    throw PrecisionExhausted("series not converged after max_terms=" + std::to_string(policy_.max_terms),
                             policy_.max_terms * 2, "max_terms");
  }
  return false;
}

}  // namespace congamma
