#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparsetail/rational.hpp"

namespace sparsetail {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// Digits 0-9 then a-z for alphabets up to 36; comma-separated integers above.
Word parseWord(std::string_view text, int alphabetSize);
std::string formatWord(const Word& word, int alphabetSize);

class Sft {
 public:
  Sft() = default;

  int alphabetSize() const { return a_; }
  bool allowed(Symbol from, Symbol to) const { return matrix_[static_cast<std::size_t>(from * a_ + to)] != 0; }
  int mixingPower() const { return mixingPower_; }
  /// Shortest w with from·w·to legal.
  const Word& connector(Symbol from, Symbol to) const {
    return connectors_[static_cast<std::size_t>(from * a_ + to)];
  }
  bool isLegal(const Word& word) const;
  /// Index of the first illegal transition (word[i], word[i+1]), if any.
  std::optional<std::size_t> firstIllegal(const Word& word) const;
  const std::vector<char>& matrix() const { return matrix_; }

  friend Sft buildSft(int alphabetSize, const std::vector<std::vector<bool>>& transitions);

 private:
  int a_ = 0;
  std::vector<char> matrix_;
  int mixingPower_ = 0;
  std::vector<Word> connectors_;
};

/// Throws NotMixing if no power p <= A² of the matrix is positive.
Sft buildSft(int alphabetSize, const std::vector<std::vector<bool>>& transitions);
/// All transitions allowed except the listed 2-words.
Sft buildSftForbidden(int alphabetSize, const std::vector<Word>& forbidden);
Sft fullShift(int alphabetSize);

/// Locally constant potential of depth k: φ(x) depends on x_0..x_{k-1}.
class Potential {
 public:
  Potential() = default;
  /// `table` must cover exactly the legal k-words unless `fallback` is given,
  /// which then fills the missing legal ones.
  Potential(const Sft& sft, int depth, const std::map<Word, Rational>& table,
            std::optional<Rational> fallback = std::nullopt);

  int depth() const { return k_; }
  int alphabetSize() const { return a_; }
  /// Value on the window with base-A code `code` (first symbol most significant).
  const Rational& valueAt(std::size_t code) const { return values_[code]; }
  const Rational& value(const Word& window) const;
  bool legalWindow(std::size_t code) const { return legal_[code] != 0; }
  std::size_t windowCount() const { return values_.size(); }
  const Rational& maxAbs() const { return maxAbs_; }
  Rational maxValue() const;
  Rational minValue() const;

  /// φ − t.
  Potential shifted(const Rational& t) const;
  /// Least common denominator of all legal values.
  BigInt commonDenominator() const;

 private:
  int k_ = 0;
  int a_ = 0;
  std::vector<Rational> values_;
  std::vector<char> legal_;
  Rational maxAbs_{0};
};

std::size_t windowCode(const Symbol* begin, int length, int alphabetSize);

/// Σ_{i<|word|} φ(window at i); windows past the end read `continuation`.
Rational birkhoffSum(const Sft& sft, const Word& word, const Potential& potential,
                     const Word& continuation);

/// Exact (min, max) cycle mean of φ over the window graph (Karp, run twice).
std::pair<Rational, Rational> averageRange(const Sft& sft, const Potential& potential);

/// A legal word containing every legal m-word as a factor.
Word universalWord(const Sft& sft, int m);

/// All legal m-words in lexicographic order.
std::vector<Word> legalWords(const Sft& sft, int m);

}  // namespace sparsetail
