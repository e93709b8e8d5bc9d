#pragma once

namespace mlqm {

/// A quantity of the form base * (1 + epsilon), stored as the explicit pair.
///
/// The corrections this library produces sit at 1e-20..1e-45 relative to
/// their base; adding them into the base would round them away (ulp of 1.0
/// is ~2.2e-16). All arithmetic therefore happens on (base, epsilon)
/// separately and the pair is only ever collapsed for display.
class CorrectionValue {
 public:
  constexpr CorrectionValue() = default;
  constexpr CorrectionValue(double base, double epsilon) : base_(base), epsilon_(epsilon) {}

  static constexpr CorrectionValue one() { return {1.0, 0.0}; }

  constexpr double base() const { return base_; }
  constexpr double epsilon() const { return epsilon_; }

  /// Collapsed value. Loses epsilon once it drops below ulp(base); display only.
  constexpr double value() const { return base_ * (1.0 + epsilon_); }

  /// b1(1+e1) * b2(1+e2) = b1 b2 (1 + e1 + e2 + e1 e2).
  friend constexpr CorrectionValue operator*(const CorrectionValue& lhs, const CorrectionValue& rhs) {
    return {lhs.base_ * rhs.base_, lhs.epsilon_ + rhs.epsilon_ + lhs.epsilon_ * rhs.epsilon_};
  }

  /// Scales the base; the relative correction is unchanged.
  constexpr CorrectionValue scaled(double s) const { return {base_ * s, epsilon_}; }

  friend constexpr bool operator==(const CorrectionValue& a, const CorrectionValue& b) {
    return a.base_ == b.base_ && a.epsilon_ == b.epsilon_;
  }
  friend constexpr bool operator!=(const CorrectionValue& a, const CorrectionValue& b) { return !(a == b); }

 private:
  double base_ = 0.0;
  double epsilon_ = 0.0;
};

}  // namespace mlqm
