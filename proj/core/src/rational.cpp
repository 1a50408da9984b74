#include "sparsetail/rational.hpp"

#include <cctype>
#include <limits>

#include "sparsetail/error.hpp"

namespace sparsetail {

namespace {

BigInt parseInteger(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw Error(Errc::Format, "expected an integer in \"" + std::string(whole) + "\"");
  }
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(Errc::Format, "not an exact fraction: \"" + std::string(whole) + "\"");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool fitsInt64(const BigInt& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational parseRational(std::string_view text) {
  const std::string_view body = trim(text);
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parseInteger(body, text));
  }
  const BigInt num = parseInteger(trim(body.substr(0, slash)), text);
  const std::string_view denText = trim(body.substr(slash + 1));
  if (!denText.empty() && (denText.front() == '-' || denText.front() == '+')) {
    throw Error(Errc::Format, "denominator must be unsigned in \"" + std::string(text) + "\"");
  }
  const BigInt den = parseInteger(denText, text);
  if (den == 0) {
    throw Error(Errc::Format, "zero denominator in \"" + std::string(text) + "\"");
  }
  return Rational(num, den);
}

std::string formatRational(const Rational& value) {
  return numeratorOf(value).str() + "/" + denominatorOf(value).str();
}

BigInt numeratorOf(const Rational& value) { return boost::multiprecision::numerator(value); }
BigInt denominatorOf(const Rational& value) { return boost::multiprecision::denominator(value); }

BigInt floorOf(const Rational& value) {
  const BigInt n = numeratorOf(value);
  const BigInt d = denominatorOf(value);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

BigInt ceilOf(const Rational& value) {
  const BigInt n = numeratorOf(value);
  const BigInt d = denominatorOf(value);
  BigInt q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

Rational absOf(const Rational& value) { return value < 0 ? Rational(-value) : value; }

std::int64_t toInt64(const BigInt& value) {
  if (!fitsInt64(value)) {
    throw Error(Errc::Overflow, "value " + value.str() + " does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(value);
}

Rational scaledAverage(std::int64_t sum, std::int64_t scale, std::int64_t length) {
  return Rational(BigInt(sum), BigInt(scale) * BigInt(length));
}

ScaledBound::ScaledBound(const Rational& bound) : bound_(bound) {
  const BigInt n = numeratorOf(bound);
  const BigInt d = denominatorOf(bound);
  // Keep |num|,|den| below 2^62 so value*den and num*multiplier fit in 127 bits.
  const BigInt limit = BigInt(1) << 62;
  fast_ = n < limit && n > -limit && d < limit;
  if (fast_) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }
}

bool ScaledBound::atLeast(std::int64_t value, std::int64_t multiplier) const {
  if (fast_) {
    return static_cast<__int128>(value) * den_ >= num_ * static_cast<__int128>(multiplier);
  }
  return Rational(value) >= bound_ * multiplier;
}

bool ScaledBound::atMost(std::int64_t value, std::int64_t multiplier) const {
  if (fast_) {
    return static_cast<__int128>(value) * den_ <= num_ * static_cast<__int128>(multiplier);
  }
  return Rational(value) <= bound_ * multiplier;
}

}  // namespace sparsetail
