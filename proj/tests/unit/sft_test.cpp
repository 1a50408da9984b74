#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "cycle_oracle.hpp"
#include "sparsetail/error.hpp"
#include "sparsetail/sft.hpp"

using namespace sparsetail;

namespace {

Sft golden() { return buildSftForbidden(2, {Word{1, 1}}); }

Word w(std::string_view text, int a = 2) { return parseWord(text, a); }

Potential pm(const Sft& sft, Rational zero, Rational one) {
  return Potential(sft, 1, {{Word{0}, zero}, {Word{1}, one}});
}

bool containsAll(const Sft& sft, const Word& word, int m) {
  std::set<Word> seen;
  for (std::size_t i = 0; i + static_cast<std::size_t>(m) <= word.size(); ++i) {
    seen.insert(Word(word.begin() + static_cast<std::ptrdiff_t>(i), word.begin() + static_cast<std::ptrdiff_t>(i) + m));
  }
  for (const Word& x : legalWords(sft, m))
    if (!seen.count(x)) return false;
  return true;
}

/// All legal words of length n, by brute force.
std::vector<Word> allWords(const Sft& sft, int n) {
  std::vector<Word> out;
  Word cur;
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c < sft.alphabetSize(); ++c) {
      if (!cur.empty() && !sft.allowed(cur.back(), static_cast<Symbol>(c))) continue;
      cur.push_back(static_cast<Symbol>(c));
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace

TEST(Words, ParseAndFormat) {
  EXPECT_EQ(w("0110"), (Word{0, 1, 1, 0}));
  EXPECT_EQ(formatWord(Word{0, 1, 1, 0}, 2), "0110");
  EXPECT_EQ(parseWord("a9", 16), (Word{10, 9}));
  EXPECT_EQ(parseWord("40,2,39", 50), (Word{40, 2, 39}));
  EXPECT_EQ(formatWord(Word{40, 2, 39}, 50), "40,2,39");
  EXPECT_THROW(parseWord("012", 2), Error);
}

TEST(Sft, FullShift) {
  const Sft s = fullShift(2);
  EXPECT_EQ(s.mixingPower(), 1);
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b) EXPECT_TRUE(s.connector(a, b).empty());
}

TEST(Sft, GoldenMean) {
  const Sft s = golden();
  EXPECT_EQ(s.mixingPower(), 2);
  EXPECT_EQ(s.connector(1, 1), w("0"));
  EXPECT_TRUE(s.connector(0, 1).empty());
  EXPECT_FALSE(s.isLegal(w("0110")));
  EXPECT_EQ(s.firstIllegal(w("0110")), std::optional<std::size_t>(1));
}

TEST(Sft, PeriodicMatrixIsNotMixing) {
  try {
    buildSft(2, {{false, true}, {true, false}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotMixing);
  }
  EXPECT_THROW(buildSft(1, {{true}}), Error);
}

TEST(Sft, ConnectorsAreLegalAndShort) {
  const std::vector<Sft> shifts{fullShift(3), golden(), buildSftForbidden(3, {w("00", 3), w("12", 3), w("21", 3)}),
                                buildSft(3, {{false, true, false}, {false, false, true}, {true, true, false}})};
  for (const Sft& s : shifts) {
    for (int a = 0; a < s.alphabetSize(); ++a) {
      for (int b = 0; b < s.alphabetSize(); ++b) {
        Word x{static_cast<Symbol>(a)};
        const Word& c = s.connector(static_cast<Symbol>(a), static_cast<Symbol>(b));
        x.insert(x.end(), c.begin(), c.end());
        x.push_back(static_cast<Symbol>(b));
        EXPECT_TRUE(s.isLegal(x));
        EXPECT_LE(static_cast<int>(c.size()), s.mixingPower());
      }
    }
  }
}

TEST(Potential, RequiresExactlyTheLegalWords) {
  const Sft s = golden();
  EXPECT_NO_THROW(Potential(s, 2, {{w("00"), 1}, {w("01"), 0}, {w("10"), 0}}));
  EXPECT_THROW(Potential(s, 2, {{w("00"), 1}, {w("01"), 0}}), Error);
  EXPECT_THROW(Potential(s, 2, {{w("00"), 1}, {w("01"), 0}, {w("10"), 0}, {w("11"), 0}}), Error);
  EXPECT_THROW(Potential(s, 2, {{w("0"), 1}}), Error);
  const Potential f(s, 2, {{w("00"), 1}}, Rational(-1, 2));
  EXPECT_EQ(f.value(w("10")), Rational(-1, 2));
  EXPECT_EQ(f.maxAbs(), Rational(1));
}

TEST(BirkhoffSum, Examples) {
  const Sft s = fullShift(2);
  const Potential phi = pm(s, 1, -1);
  EXPECT_EQ(birkhoffSum(s, w("000"), phi, {}), 3);
  EXPECT_EQ(birkhoffSum(s, w("0101"), phi, {}), 0);
  const Potential two(s, 2, {{w("00"), 1}}, Rational(0));
  EXPECT_EQ(birkhoffSum(s, w("000"), two, w("0")), 3);
  EXPECT_EQ(birkhoffSum(s, w("000"), two, w("1")), 2);
  EXPECT_THROW(birkhoffSum(s, w("000"), two, {}), Error);
  EXPECT_THROW(birkhoffSum(golden(), w("011"), pm(golden(), 1, -2), {}), Error);
}

TEST(BirkhoffSum, AdditiveUnderConcatenation) {
  const Sft s = golden();
  const Potential phi(s, 3,
                      {{w("000"), Rational(1, 3)}, {w("001"), -1}, {w("010"), Rational(5, 7)}, {w("100"), 2},
                       {w("101"), Rational(-3, 2)}});
  for (const Word& x : allWords(s, 9)) {
    const Word c = x.back() == 1 ? w("01") : w("00");
    for (std::size_t cut = 0; cut <= x.size(); ++cut) {
      const Word a(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cut));
      const Word b(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end());
      Word bc = b;
      bc.insert(bc.end(), c.begin(), c.end());
      if (!s.isLegal(bc)) continue;
      EXPECT_EQ(birkhoffSum(s, x, phi, c), birkhoffSum(s, a, phi, bc) + birkhoffSum(s, b, phi, c));
    }
  }
}

TEST(AverageRange, Examples) {
  EXPECT_EQ(averageRange(fullShift(2), pm(fullShift(2), 1, -1)), std::make_pair(Rational(-1), Rational(1)));
  EXPECT_EQ(averageRange(golden(), pm(golden(), 1, -2)), std::make_pair(Rational(-1, 2), Rational(1)));
  const Sft s3 = fullShift(3);
  const Potential c(s3, 2, {}, Rational(7, 3));
  EXPECT_EQ(averageRange(s3, c), std::make_pair(Rational(7, 3), Rational(7, 3)));
}

TEST(AverageRange, MatchesSimpleCycleEnumeration) {
  const std::vector<Sft> shifts{fullShift(2), golden(), fullShift(3),
                                buildSftForbidden(3, {w("00", 3), w("12", 3), w("21", 3)})};
  std::uint32_t seed = 1;
  for (const Sft& s : shifts) {
    for (int k = 1; k <= 3; ++k) {
      std::map<Word, Rational> table;
      for (const Word& x : legalWords(s, k)) {
        seed = seed * 1103515245u + 12345u;
        table[x] = Rational(static_cast<int>(seed >> 16) % 19 - 9, 1 + static_cast<int>(seed >> 8) % 4);
      }
      const Potential phi(s, k, table);
      const auto [lo, hi] = averageRange(s, phi);
      const auto [olo, ohi] = oracle::simpleCycleRange(
          s.alphabetSize(), k, [&](int a, int b) { return s.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b)); },
          [&](const std::vector<int>& win) {
            Word x(win.begin(), win.end());
            return oracle::Q(phi.value(x));
          });
      EXPECT_EQ(lo, olo);
      EXPECT_EQ(hi, ohi);
    }
  }
}

TEST(AverageRange, BoundsEveryCyclicWord) {
  const Sft s = golden();
  const Potential phi(s, 2, {{w("00"), Rational(1, 2)}, {w("01"), -3}, {w("10"), 2}});
  const auto [lo, hi] = averageRange(s, phi);
  for (int n = 1; n <= 8; ++n) {
    for (const Word& x : allWords(s, n)) {
      if (!s.allowed(x.back(), x.front())) continue;
      const Rational avg = birkhoffSum(s, x, phi, Word{x.front()}) / n;
      EXPECT_LE(lo, avg);
      EXPECT_LE(avg, hi);
    }
  }
}

TEST(UniversalWord, Examples) {
  EXPECT_EQ(universalWord(fullShift(2), 2), w("00110"));
  EXPECT_EQ(universalWord(golden(), 2), w("0010"));
  EXPECT_EQ(universalWord(fullShift(2), 1), w("01"));
}

TEST(UniversalWord, ContainsEveryLegalWord) {
  const std::vector<Sft> shifts{fullShift(2), golden(), fullShift(3),
                                buildSftForbidden(3, {w("00", 3), w("12", 3), w("21", 3)}),
                                buildSft(3, {{false, true, false}, {false, false, true}, {true, true, false}})};
  for (const Sft& s : shifts) {
    for (int m = 1; m <= 5; ++m) {
      const Word u = universalWord(s, m);
      EXPECT_TRUE(s.isLegal(u));
      EXPECT_TRUE(containsAll(s, u, m)) << formatWord(u, s.alphabetSize());
      const std::size_t bound = static_cast<std::size_t>(std::pow(s.alphabetSize(), m)) *
                                    static_cast<std::size_t>(1 + s.mixingPower()) + static_cast<std::size_t>(m);
      EXPECT_LE(u.size(), bound);
    }
  }
}

TEST(LegalWords, LexicographicAndComplete) {
  EXPECT_EQ(legalWords(golden(), 3), (std::vector<Word>{w("000"), w("001"), w("010"), w("100"), w("101")}));
  EXPECT_EQ(legalWords(fullShift(3), 2).size(), 9u);
}
