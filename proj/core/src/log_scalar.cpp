#include "qfreg/log_scalar.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qfreg/error.hpp"

namespace qfreg {

LogScalar LogScalar::from_log2(double log2_value) {
  if (std::isnan(log2_value)) throw InputError("LogScalar: NaN exponent");
  if (log2_value == -std::numeric_limits<double>::infinity()) return zero();
  if (log2_value == std::numeric_limits<double>::infinity()) return infinity();
  return LogScalar(State::positive, log2_value);
}

LogScalar LogScalar::from_double(double value) {
  if (std::isnan(value) || value < 0.0) {
    throw InputError("LogScalar: value must be nonnegative, got " + std::to_string(value));
  }
  if (value == 0.0) return zero();
  if (std::isinf(value)) return infinity();
  return LogScalar(State::positive, std::log2(value));
}

double LogScalar::log2() const {
  switch (state_) {
    case State::zero:
      return -std::numeric_limits<double>::infinity();
    case State::infinite:
      return std::numeric_limits<double>::infinity();
    case State::positive:
      break;
  }
  return log2_;
}

double LogScalar::to_double() const {
  switch (state_) {
    case State::zero:
      return 0.0;
    case State::infinite:
      return std::numeric_limits<double>::infinity();
    case State::positive:
      break;
  }
  return std::exp2(log2_);
}

LogScalar LogScalar::operator*(const LogScalar& rhs) const {
  if ((is_zero() && rhs.is_infinite()) || (is_infinite() && rhs.is_zero())) {
    throw Error("LogScalar: 0 * inf is undefined");
  }
  if (is_zero() || rhs.is_zero()) return zero();
  if (is_infinite() || rhs.is_infinite()) return infinity();
  return LogScalar(State::positive, log2_ + rhs.log2_);
}

LogScalar LogScalar::operator/(const LogScalar& rhs) const {
  if (rhs.is_zero()) {
    if (is_zero()) throw Error("LogScalar: 0 / 0 is undefined");
    return infinity();
  }
  if (rhs.is_infinite()) {
    if (is_infinite()) throw Error("LogScalar: inf / inf is undefined");
    return zero();
  }
  if (is_zero()) return zero();
  if (is_infinite()) return infinity();
  return LogScalar(State::positive, log2_ - rhs.log2_);
}

LogScalar LogScalar::operator+(const LogScalar& rhs) const {
  if (is_infinite() || rhs.is_infinite()) return infinity();
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  const double hi = std::max(log2_, rhs.log2_);
  const double lo = std::min(log2_, rhs.log2_);
  return LogScalar(State::positive, hi + std::log2(1.0 + std::exp2(lo - hi)));
}

LogScalar LogScalar::pow(double exponent) const {
  if (std::isnan(exponent)) throw InputError("LogScalar::pow: NaN exponent");
  if (exponent == 0.0) return one();
  if (is_zero()) return exponent > 0 ? zero() : infinity();
  if (is_infinite()) return exponent > 0 ? infinity() : zero();
  return from_log2(log2_ * exponent);
}

std::partial_ordering LogScalar::operator<=>(const LogScalar& rhs) const {
  return log2() <=> rhs.log2();
}

bool LogScalar::operator==(const LogScalar& rhs) const {
  return state_ == rhs.state_ && (state_ != State::positive || log2_ == rhs.log2_);
}

std::string LogScalar::to_string() const {
  if (is_zero()) return "0";
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << "2^" << log2_;
  return os.str();
}

LogScalar min(const LogScalar& a, const LogScalar& b) { return (b < a) ? b : a; }
LogScalar max(const LogScalar& a, const LogScalar& b) { return (a < b) ? b : a; }

}  // namespace qfreg
