#pragma once

#include <compare>
#include <string>

namespace qfreg {

/// Nonnegative real stored as its base-2 logarithm.
///
/// Certificate constants routinely live around 2^-1500 and below, far outside
/// the range of a double. Products, powers and minima are exact in exponent
/// arithmetic (up to rounding of the stored exponent); sums use a stable
/// log-sum-exp.
class LogScalar {
 public:
  enum class State { zero, positive, infinite };

  constexpr LogScalar() = default;

  static LogScalar zero() { return LogScalar(State::zero, 0.0); }
  static LogScalar infinity() { return LogScalar(State::infinite, 0.0); }
  static LogScalar one() { return LogScalar(State::positive, 0.0); }
  static LogScalar from_log2(double log2_value);
  /// Throws InputError for negative or NaN input.
  static LogScalar from_double(double value);
  static LogScalar power_of_two(double exponent) { return from_log2(exponent); }

  State state() const { return state_; }
  bool is_zero() const { return state_ == State::zero; }
  bool is_infinite() const { return state_ == State::infinite; }
  bool is_positive_finite() const { return state_ == State::positive; }

  /// -inf for zero, +inf for infinity.
  double log2() const;
  /// Converts back to a double; underflows to 0 / overflows to inf silently.
  double to_double() const;

  LogScalar operator*(const LogScalar& rhs) const;
  LogScalar operator/(const LogScalar& rhs) const;
  LogScalar operator+(const LogScalar& rhs) const;
  LogScalar& operator*=(const LogScalar& rhs) { return *this = *this * rhs; }
  LogScalar& operator+=(const LogScalar& rhs) { return *this = *this + rhs; }

  /// this^exponent. 0^0 and inf^0 are 1; 0^negative is infinite.
  LogScalar pow(double exponent) const;

  std::partial_ordering operator<=>(const LogScalar& rhs) const;
  bool operator==(const LogScalar& rhs) const;

  /// Human-readable "2^<exponent>" form.
  std::string to_string() const;

 private:
  constexpr LogScalar(State s, double l) : state_(s), log2_(l) {}

  State state_ = State::zero;
  double log2_ = 0.0;
};

LogScalar min(const LogScalar& a, const LogScalar& b);
LogScalar max(const LogScalar& a, const LogScalar& b);

}  // namespace qfreg
