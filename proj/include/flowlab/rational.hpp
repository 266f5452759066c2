#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace flowlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational time/size value. All simulation arithmetic goes through
/// this type; there is no floating point anywhere in the core.
class TimeQ {
 public:
  TimeQ() : v_(0) {}
  TimeQ(long long value) : v_(value) {}  // NOLINT: implicit by design
  TimeQ(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("TimeQ: zero denominator");
    v_ = BigRational(num, den);
  }
  explicit TimeQ(BigRational v) : v_(std::move(v)) {}

  static TimeQ from_fraction(long long num, long long den) {
    return TimeQ(BigInt(num), BigInt(den));
  }

  // Accepts "p/q", integers, and plain decimals ("3", "-0.25"), parsed exactly.
  static TimeQ parse(const std::string& s);

  const BigRational& value() const { return v_; }
  BigInt num() const { return boost::multiprecision::numerator(v_); }
  BigInt den() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_negative() const { return v_ < 0; }
  int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

  TimeQ operator+(const TimeQ& o) const { return TimeQ(BigRational(v_ + o.v_)); }
  TimeQ operator-(const TimeQ& o) const { return TimeQ(BigRational(v_ - o.v_)); }
  TimeQ operator*(const TimeQ& o) const { return TimeQ(BigRational(v_ * o.v_)); }
  TimeQ operator/(const TimeQ& o) const {
    if (o.v_ == 0) throw std::domain_error("TimeQ: division by zero");
    return TimeQ(BigRational(v_ / o.v_));
  }
  TimeQ operator-() const { return TimeQ(BigRational(-v_)); }
  TimeQ& operator+=(const TimeQ& o) { v_ += o.v_; return *this; }
  TimeQ& operator-=(const TimeQ& o) { v_ -= o.v_; return *this; }
  TimeQ& operator*=(const TimeQ& o) { v_ *= o.v_; return *this; }

  auto operator<=>(const TimeQ& o) const {
    if (v_ < o.v_) return std::strong_ordering::less;
    if (v_ > o.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const TimeQ& o) const { return v_ == o.v_; }

  /// Largest integer <= value.
  BigInt floor() const;

  /// Canonical exact form: "p" or "p/q".
  std::string str() const;

  /// Decimal rendering with the given number of significant digits.
  std::string decimal(int significant_digits = 20) const;

  double to_double() const { return v_.convert_to<double>(); }

 private:
  BigRational v_;
};

inline std::ostream& operator<<(std::ostream& os, const TimeQ& q) {
  return os << q.str();
}

inline TimeQ min(const TimeQ& a, const TimeQ& b) { return a < b ? a : b; }
inline TimeQ max(const TimeQ& a, const TimeQ& b) { return a < b ? b : a; }
inline TimeQ abs(const TimeQ& a) { return a.is_negative() ? -a : a; }

/// floor(sqrt(x)) for nonnegative integers.
BigInt isqrt(const BigInt& x);

}  // namespace flowlab
