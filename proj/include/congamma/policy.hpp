#pragma once

#include <string>

#include "congamma/bigreal.hpp"

namespace congamma {

/// Working precision and truncation budget for every series evaluation.
struct PrecisionPolicy {
  /// Hard ceiling for automatically raised working precision.
  static constexpr int kMaxWorkingDigits = 20000;

  int digits = 50;
  long max_terms = 100000;
  double tail_tol = 1e-12;
  /// When false, no automatic precision raise happens: an evaluation whose
  /// cancellation exceeds `digits` throws PrecisionExhausted instead.
  bool auto_raise = true;

  void validate() const;

  /// Digits to carry for a computation that cancels `cancellation_digits`
  /// leading digits. With auto_raise this is digits + cancellation + 10
  /// guard digits; otherwise it is `digits`, provided enough survive to meet
  /// tail_tol.
  int working_digits(double cancellation_digits) const;

  /// Smallest `digits` that the strict rule accepts for the given
  /// cancellation.
  long sufficient_digits(double cancellation_digits) const;

  /// Same policy at a different working precision.
  PrecisionPolicy with_digits(int d) const {
    PrecisionPolicy p = *this;
    p.digits = d;
    return p;
  }
};

/// A truncated series evaluation with its truncation diagnostics.
struct SeriesResult {
  double input_x = 0.0;
  BigReal value;
  long terms_used = 0;
  /// Bound on the omitted tail (same units as value).
  BigReal tail_bound;
  int precision_used = 0;
  /// |term_{N}/term_{N-1}| at the truncation point.
  double last_ratio = 0.0;
  /// Set when the input lies outside the formula's stated validity range.
  bool validity_warning = false;
};

/// Stopping rule shared by every infinite series: stop once |term| <
/// tail_tol * max(1, |partial|) for three consecutive terms and the caller's
/// analytic ratio bound certifies monotone decay (ratio <= 1/2, so the tail is
/// bounded by the last term).
class TruncationRule {
 public:
  TruncationRule(const PrecisionPolicy& policy, int working_digits);

  /// Feed the latest term and partial sum (after adding the term). Returns
  /// true when the series may stop. Throws PrecisionExhausted (parameter
  /// "max_terms") when the budget runs out first.
  bool done(const BigReal& term, const BigReal& partial, bool ratio_certified);

  long terms() const { return terms_; }
  const BigReal& last_term_magnitude() const { return last_abs_; }
  double last_ratio() const { return last_ratio_; }

 private:
  const PrecisionPolicy& policy_;
  BigReal tol_;
  BigReal last_abs_;
  long terms_ = 0;
  int small_run_ = 0;
  double last_ratio_ = 0.0;
};

}  // namespace congamma
