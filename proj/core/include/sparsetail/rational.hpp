#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sparsetail {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p" or "-p/q". Throws Error(Errc::Format) on anything else
/// (no decimal points: every value in the criterion path is exact).
Rational parseRational(std::string_view text);

/// Always "p/q" with q > 0 and gcd 1, so "1/1" for one.
std::string formatRational(const Rational& value);

BigInt numeratorOf(const Rational& value);
BigInt denominatorOf(const Rational& value);

BigInt floorOf(const Rational& value);
BigInt ceilOf(const Rational& value);

Rational absOf(const Rational& value);

std::int64_t toInt64(const BigInt& value);  // throws Error(Errc::Overflow)

/// `sum / (scale * length)` for sums kept in integer units of 1/scale.
Rational scaledAverage(std::int64_t sum, std::int64_t scale, std::int64_t length);

/// Exact test of `value <= bound * multiplier` on 128-bit integers, with a
/// big-integer fallback when the bound's terms do not fit.
class ScaledBound {
 public:
  ScaledBound() = default;
  explicit ScaledBound(const Rational& bound);

  bool atLeast(std::int64_t value, std::int64_t multiplier) const;  // value >= bound*m
  bool atMost(std::int64_t value, std::int64_t multiplier) const;   // value <= bound*m
  const Rational& bound() const { return bound_; }

 private:
  Rational bound_{0};
  bool fast_ = true;
  __int128 num_ = 0;
  __int128 den_ = 1;
};

}  // namespace sparsetail
