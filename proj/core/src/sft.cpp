#include "sparsetail/sft.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "sparsetail/error.hpp"
#include "sparsetail/window_graph.hpp"

namespace sparsetail {

namespace {

constexpr std::int64_t kMaxCodes = std::int64_t{1} << 24;

std::int64_t checkedPower(int base, int exp, const char* what) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > kMaxCodes) {
      throw Error(Errc::InvalidParams, std::string(what) + ": " + std::to_string(base) + "^" +
                                           std::to_string(exp) + " words is too many");
    }
  }
  return v;
}

int symbolValue(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'z') return ch - 'a' + 10;
  return -1;
}

}  // namespace

Word parseWord(std::string_view text, int alphabetSize) {
  Word out;
  auto push = [&](long v, std::string_view token) {
    if (v < 0 || v >= alphabetSize) {
      throw Error(Errc::Format, "symbol \"" + std::string(token) + "\" outside alphabet of size " +
                                   std::to_string(alphabetSize));
    }
    out.push_back(static_cast<Symbol>(v));
  };
  if (text.find(',') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      std::string_view token = text.substr(pos, comma - pos);
      long v = 0;
      if (token.empty()) throw Error(Errc::Format, "empty symbol in \"" + std::string(text) + "\"");
      for (char ch : token) {
        if (ch < '0' || ch > '9') throw Error(Errc::Format, "bad symbol \"" + std::string(token) + "\"");
        v = v * 10 + (ch - '0');
        if (v > 255) break;
      }
      push(v, token);
      pos = comma + 1;
    }
    return out;
  }
  for (char ch : text) push(symbolValue(ch), std::string_view(&ch, 1));
  return out;
}

std::string formatWord(const Word& word, int alphabetSize) {
  std::string out;
  if (alphabetSize <= 36) {
    out.reserve(word.size());
    for (Symbol s : word) out.push_back(s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + s - 10));
    return out;
  }
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(word[i]);
  }
  return out;
}

bool Sft::isLegal(const Word& word) const { return !firstIllegal(word).has_value(); }

std::optional<std::size_t> Sft::firstIllegal(const Word& word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= a_) return i;
    if (i + 1 < word.size() && word[i + 1] < a_ && !allowed(word[i], word[i + 1])) return i;
  }
  return std::nullopt;
}

Sft buildSft(int alphabetSize, const std::vector<std::vector<bool>>& transitions) {
  if (alphabetSize < 2 || alphabetSize > 255) {
    throw Error(Errc::InvalidParams, "alphabet size must be in [2, 255], got " + std::to_string(alphabetSize));
  }
  const auto a = static_cast<std::size_t>(alphabetSize);
  if (transitions.size() != a) throw Error(Errc::InvalidParams, "transition matrix needs " + std::to_string(a) + " rows");
  Sft sft;
  sft.a_ = alphabetSize;
  sft.matrix_.assign(a * a, 0);
  for (std::size_t i = 0; i < a; ++i) {
    if (transitions[i].size() != a) {
      throw Error(Errc::InvalidParams, "transition row " + std::to_string(i) + " needs " + std::to_string(a) + " entries");
    }
    for (std::size_t j = 0; j < a; ++j) sft.matrix_[i * a + j] = transitions[i][j] ? 1 : 0;
  }

  std::vector<char> power = sft.matrix_;
  const std::size_t limit = a * a;
  for (std::size_t p = 1;; ++p) {
    if (std::all_of(power.begin(), power.end(), [](char c) { return c != 0; })) {
      sft.mixingPower_ = static_cast<int>(p);
      break;
    }
    if (p >= limit) {
      throw Error(Errc::NotMixing, "no power of the transition matrix up to " + std::to_string(limit) +
                                       " is positive");
    }
    std::vector<char> next(a * a, 0);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t l = 0; l < a; ++l)
        if (power[i * a + l])
          for (std::size_t j = 0; j < a; ++j)
            if (sft.matrix_[l * a + j]) next[i * a + j] = 1;
    power = std::move(next);
  }

  sft.connectors_.assign(a * a, Word{});
  for (std::size_t from = 0; from < a; ++from) {
    // BFS over paths from → v of at least one step; pred gives the path back.
    std::vector<int> pred(a, -2);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < a; ++v) {
      if (sft.matrix_[from * a + v]) {
        pred[v] = -1;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < a; ++v) {
        if (sft.matrix_[u * a + v] && pred[v] == -2) {
          pred[v] = static_cast<int>(u);
          queue.push_back(v);
        }
      }
    }
    for (std::size_t to = 0; to < a; ++to) {
      Word w;
      for (int v = pred[to]; v >= 0; v = pred[static_cast<std::size_t>(v)]) w.push_back(static_cast<Symbol>(v));
      std::reverse(w.begin(), w.end());
      sft.connectors_[from * a + to] = std::move(w);
    }
  }
  return sft;
}

Sft buildSftForbidden(int alphabetSize, const std::vector<Word>& forbidden) {
  if (alphabetSize < 2 || alphabetSize > 255) {
    throw Error(Errc::InvalidParams, "alphabet size must be in [2, 255], got " + std::to_string(alphabetSize));
  }
  const auto a = static_cast<std::size_t>(alphabetSize);
  std::vector<std::vector<bool>> m(a, std::vector<bool>(a, true));
  for (const Word& w : forbidden) {
    if (w.size() != 2) {
      throw Error(Errc::InvalidParams, "forbidden words must have length 2, got \"" +
                                           formatWord(w, alphabetSize) + "\"");
    }
    m[w[0]][w[1]] = false;
  }
  return buildSft(alphabetSize, m);
}

Sft fullShift(int alphabetSize) { return buildSftForbidden(alphabetSize, {}); }

std::size_t windowCode(const Symbol* begin, int length, int alphabetSize) {
  std::size_t code = 0;
  for (int i = 0; i < length; ++i) code = code * static_cast<std::size_t>(alphabetSize) + begin[i];
  return code;
}

Potential::Potential(const Sft& sft, int depth, const std::map<Word, Rational>& table,
                     std::optional<Rational> fallback)
    : k_(depth), a_(sft.alphabetSize()) {
  if (depth < 1) throw Error(Errc::InvalidPotential, "potential depth must be at least 1");
  const std::int64_t codes = checkedPower(a_, depth, "potential");
  values_.assign(static_cast<std::size_t>(codes), Rational(0));
  legal_.assign(static_cast<std::size_t>(codes), 0);
  Word w(static_cast<std::size_t>(depth));
  for (std::int64_t code = 0; code < codes; ++code) {
    std::int64_t c = code;
    for (int i = depth - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % a_);
      c /= a_;
    }
    legal_[static_cast<std::size_t>(code)] = sft.isLegal(w) ? 1 : 0;
  }
  std::vector<char> seen(static_cast<std::size_t>(codes), 0);
  for (const auto& [word, value] : table) {
    if (static_cast<int>(word.size()) != depth) {
      throw Error(Errc::InvalidPotential, "window \"" + formatWord(word, a_) + "\" has length " +
                                              std::to_string(word.size()) + ", expected " +
                                              std::to_string(depth));
    }
    const std::size_t code = windowCode(word.data(), depth, a_);
    if (!legal_[code]) {
      throw Error(Errc::InvalidPotential, "value given for illegal word \"" + formatWord(word, a_) + "\"");
    }
    values_[code] = value;
    seen[code] = 1;
  }
  bool first = true;
  for (std::size_t code = 0; code < values_.size(); ++code) {
    if (!legal_[code]) continue;
    if (!seen[code]) {
      if (!fallback) {
        Word miss(static_cast<std::size_t>(depth));
        std::size_t c = code;
        for (int i = depth - 1; i >= 0; --i) {
          miss[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % static_cast<std::size_t>(a_));
          c /= static_cast<std::size_t>(a_);
        }
        throw Error(Errc::InvalidPotential, "no value for legal word \"" + formatWord(miss, a_) + "\"");
      }
      values_[code] = *fallback;
    }
    const Rational mag = absOf(values_[code]);
    if (first || mag > maxAbs_) maxAbs_ = mag;
    first = false;
  }
}

const Rational& Potential::value(const Word& window) const {
  if (static_cast<int>(window.size()) != k_) {
    throw Error(Errc::InvalidPotential, "window length " + std::to_string(window.size()) + " != depth");
  }
  const std::size_t code = windowCode(window.data(), k_, a_);
  if (!legal_[code]) throw Error(Errc::IllegalWord, "illegal window \"" + formatWord(window, a_) + "\"");
  return values_[code];
}

Rational Potential::maxValue() const {
  std::optional<Rational> best;
  for (std::size_t c = 0; c < values_.size(); ++c)
    if (legal_[c] && (!best || values_[c] > *best)) best = values_[c];
  return best.value_or(Rational(0));
}

Rational Potential::minValue() const {
  std::optional<Rational> best;
  for (std::size_t c = 0; c < values_.size(); ++c)
    if (legal_[c] && (!best || values_[c] < *best)) best = values_[c];
  return best.value_or(Rational(0));
}

Potential Potential::shifted(const Rational& t) const {
  Potential out = *this;
  bool first = true;
  for (std::size_t c = 0; c < out.values_.size(); ++c) {
    if (!out.legal_[c]) continue;
    out.values_[c] -= t;
    const Rational mag = absOf(out.values_[c]);
    if (first || mag > out.maxAbs_) out.maxAbs_ = mag;
    first = false;
  }
  return out;
}

BigInt Potential::commonDenominator() const {
  BigInt q = 1;
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (!legal_[c]) continue;
    const BigInt d = denominatorOf(values_[c]);
    q = q / boost::multiprecision::gcd(q, d) * d;
  }
  return q;
}

Rational birkhoffSum(const Sft& sft, const Word& word, const Potential& potential, const Word& continuation) {
  const int k = potential.depth();
  if (static_cast<int>(continuation.size()) < k - 1) {
    throw Error(Errc::PrefixTooShort, "continuation needs at least " + std::to_string(k - 1) + " symbols");
  }
  Word all = word;
  all.insert(all.end(), continuation.begin(), continuation.end());
  if (auto bad = sft.firstIllegal(all)) {
    throw Error(Errc::IllegalWord, "illegal transition at position " + std::to_string(*bad));
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    sum += potential.valueAt(windowCode(all.data() + i, k, sft.alphabetSize()));
  }
  return sum;
}

std::pair<Rational, Rational> averageRange(const Sft& sft, const Potential& potential) {
  const WindowGraph graph(sft, potential.depth());
  const ScaledPotential scaled(potential);
  const Rational lo = karpMeanCycle(graph, scaled.weight, false);
  const Rational hi = karpMeanCycle(graph, scaled.weight, true);
  return {lo / scaled.scale, hi / scaled.scale};
}

std::vector<Word> legalWords(const Sft& sft, int m) {
  if (m < 1) throw Error(Errc::InvalidParams, "word length must be positive");
  checkedPower(sft.alphabetSize(), m, "legal words");
  std::vector<Word> out;
  Word w;
  const int a = sft.alphabetSize();
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == m) {
      out.push_back(w);
      return;
    }
    for (int c = 0; c < a; ++c) {
      if (!w.empty() && !sft.allowed(w.back(), static_cast<Symbol>(c))) continue;
      w.push_back(static_cast<Symbol>(c));
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return out;
}

Word universalWord(const Sft& sft, int m) {
  if (m < 1) throw Error(Errc::InvalidParams, "universal word order must be at least 1");
  const int a = sft.alphabetSize();
  if (m == 1) {
    Word out{0};
    for (int s = 1; s < a; ++s) {
      const Word& c = sft.connector(out.back(), static_cast<Symbol>(s));
      out.insert(out.end(), c.begin(), c.end());
      out.push_back(static_cast<Symbol>(s));
    }
    return out;
  }
  // Order-m de Bruijn multigraph: nodes are legal (m−1)-words, edges legal m-words.
  const WindowGraph g(sft, m);
  const std::int64_t codes = g.codeCount();
  std::vector<std::int64_t> balance(static_cast<std::size_t>(codes), 0);
  std::vector<std::vector<std::int64_t>> count(static_cast<std::size_t>(codes),
                                               std::vector<std::int64_t>(static_cast<std::size_t>(a), 0));
  for (std::int64_t u : g.nodes()) {
    for (int c = 0; c < a; ++c) {
      const std::int64_t v = g.next(u, static_cast<Symbol>(c));
      if (v < 0) continue;
      count[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)] = 1;
      ++balance[static_cast<std::size_t>(u)];
      --balance[static_cast<std::size_t>(v)];
    }
  }
  std::vector<std::int64_t> needOut, needIn;
  for (std::int64_t u : g.nodes()) {
    for (std::int64_t i = 0; i < -balance[static_cast<std::size_t>(u)]; ++i) needOut.push_back(u);
    for (std::int64_t i = 0; i < balance[static_cast<std::size_t>(u)]; ++i) needIn.push_back(u);
  }
  for (std::size_t p = 0; p < needOut.size(); ++p) {
    const std::int64_t from = needOut[p];
    const std::int64_t to = needIn[p];
    std::vector<std::int64_t> pred(static_cast<std::size_t>(codes), -1);
    std::vector<int> via(static_cast<std::size_t>(codes), -1);
    std::deque<std::int64_t> queue{from};
    pred[static_cast<std::size_t>(from)] = from;
    while (!queue.empty() && pred[static_cast<std::size_t>(to)] < 0) {
      const std::int64_t u = queue.front();
      queue.pop_front();
      for (int c = 0; c < a; ++c) {
        const std::int64_t v = g.next(u, static_cast<Symbol>(c));
        if (v < 0 || pred[static_cast<std::size_t>(v)] >= 0) continue;
        pred[static_cast<std::size_t>(v)] = u;
        via[static_cast<std::size_t>(v)] = c;
        queue.push_back(v);
      }
    }
    for (std::int64_t v = to; v != from; v = pred[static_cast<std::size_t>(v)]) {
      ++count[static_cast<std::size_t>(pred[static_cast<std::size_t>(v)])][static_cast<std::size_t>(via[static_cast<std::size_t>(v)])];
    }
  }
  // Hierholzer, smallest symbol first.
  const std::int64_t start = g.nodes().front();
  std::vector<std::int64_t> stack{start};
  std::vector<std::int64_t> circuit;
  while (!stack.empty()) {
    const std::int64_t u = stack.back();
    auto& row = count[static_cast<std::size_t>(u)];
    int c = 0;
    while (c < a && row[static_cast<std::size_t>(c)] == 0) ++c;
    if (c == a) {
      circuit.push_back(u);
      stack.pop_back();
      continue;
    }
    --row[static_cast<std::size_t>(c)];
    stack.push_back(g.next(u, static_cast<Symbol>(c)));
  }
  std::reverse(circuit.begin(), circuit.end());
  Word out = g.symbols(circuit.front());
  for (std::size_t i = 1; i < circuit.size(); ++i) out.push_back(g.lastSymbol(circuit[i]));
  return out;
}

}  // namespace sparsetail
