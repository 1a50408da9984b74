#include <gtest/gtest.h>

#include "sparsetail/error.hpp"
#include "sparsetail/rational.hpp"

using namespace sparsetail;

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parseRational("3/6"), Rational(1, 2));
  EXPECT_EQ(parseRational("-4/3"), Rational(-4, 3));
  EXPECT_EQ(parseRational("7"), Rational(7));
  EXPECT_EQ(parseRational(" 2/5 "), Rational(2, 5));
}

TEST(Rational, RejectsInexactOrMalformedText) {
  for (const char* bad : {"0.5", "1/0", "1/-2", "", "a/b", "1//2", "1e3"}) {
    try {
      parseRational(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Format) << bad;
    }
  }
}

TEST(Rational, FormatsReducedFractionWithPositiveDenominator) {
  EXPECT_EQ(formatRational(Rational(1)), "1/1");
  EXPECT_EQ(formatRational(Rational(-6, 4)), "-3/2");
  EXPECT_EQ(formatRational(Rational(0)), "0/1");
  EXPECT_EQ(parseRational(formatRational(Rational(-22, 7))), Rational(-22, 7));
}

TEST(Rational, FloorCeilAndScaledAverage) {
  EXPECT_EQ(floorOf(Rational(-7, 2)), -4);
  EXPECT_EQ(ceilOf(Rational(-7, 2)), -3);
  EXPECT_EQ(ceilOf(Rational(6, 3)), 2);
  EXPECT_EQ(scaledAverage(9, 3, 6), Rational(1, 2));
  EXPECT_THROW(toInt64(BigInt(1) << 70), Error);
}

TEST(ScaledBound, MatchesRationalComparison) {
  const std::vector<Rational> bounds{Rational(5, 6), Rational(-1, 3), Rational(0), Rational(7),
                                     Rational(BigInt(1) << 70, 3)};
  for (const Rational& b : bounds) {
    const ScaledBound sb(b);
    for (std::int64_t v = -40; v <= 40; ++v) {
      for (std::int64_t m : {1, 2, 3, 6, 17}) {
        EXPECT_EQ(sb.atMost(v, m), Rational(v) <= b * m);
        EXPECT_EQ(sb.atLeast(v, m), Rational(v) >= b * m);
      }
    }
  }
}
