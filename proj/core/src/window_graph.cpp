#include "sparsetail/window_graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sparsetail/error.hpp"

namespace sparsetail {

namespace {

constexpr std::int64_t kMaxGraphCodes = std::int64_t{1} << 22;

}  // namespace

WindowGraph::WindowGraph(const Sft& sft, int depth) : sft_(&sft), a_(sft.alphabetSize()), k_(depth) {
  if (depth < 1) throw Error(Errc::InvalidParams, "window depth must be at least 1");
  h_ = std::max(depth - 1, 1);
  codes_ = 1;
  for (int i = 0; i < h_; ++i) {
    codes_ *= a_;
    if (codes_ > kMaxGraphCodes) {
      throw Error(Errc::InvalidParams, "window graph of depth " + std::to_string(depth) + " is too large");
    }
  }
  windowCodes_ = depth == 1 ? a_ : codes_ * a_;
  legal_.assign(static_cast<std::size_t>(codes_), 0);
  for (std::int64_t code = 0; code < codes_; ++code) {
    std::int64_t c = code;
    Symbol right = static_cast<Symbol>(c % a_);
    bool ok = true;
    for (int i = 1; i < h_ && ok; ++i) {
      c /= a_;
      const Symbol left = static_cast<Symbol>(c % a_);
      ok = sft.allowed(left, right);
      right = left;
    }
    if (ok) {
      legal_[static_cast<std::size_t>(code)] = 1;
      nodes_.push_back(code);
    }
  }
  next_.assign(static_cast<std::size_t>(codes_ * a_), -1);
  for (std::int64_t u : nodes_) {
    for (int c = 0; c < a_; ++c) {
      if (sft.allowed(lastSymbol(u), static_cast<Symbol>(c))) {
        next_[static_cast<std::size_t>(u * a_ + c)] = (u * a_ + c) % codes_;
      }
    }
  }
}

Word WindowGraph::symbols(std::int64_t node) const {
  Word w(static_cast<std::size_t>(h_));
  for (int i = h_ - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<Symbol>(node % a_);
    node /= a_;
  }
  return w;
}

std::int64_t WindowGraph::nodeOf(const Symbol* last, int count) const {
  if (count < h_) throw Error(Errc::PrefixTooShort, "need " + std::to_string(h_) + " symbols for a node");
  std::int64_t code = 0;
  for (int i = count - h_; i < count; ++i) code = code * a_ + last[i];
  return code;
}

ScaledPotential::ScaledPotential(const Potential& potential) {
  scale = potential.commonDenominator();
  q = toInt64(scale);
  weight.assign(potential.windowCount(), 0);
  for (std::size_t c = 0; c < weight.size(); ++c) {
    if (!potential.legalWindow(c)) continue;
    const Rational v = potential.valueAt(c) * scale;
    weight[c] = toInt64(numeratorOf(v));
    maxAbs = std::max(maxAbs, weight[c] < 0 ? -weight[c] : weight[c]);
  }
  if (maxAbs > (std::int64_t{1} << 40)) {
    throw Error(Errc::Overflow, "scaled potential values exceed 2^40");
  }
}

namespace {


std::vector<std::int64_t> signedWeights(const std::vector<std::int64_t>& w, bool negate) {
  if (!negate) return w;
  std::vector<std::int64_t> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = -w[i];
  return out;
}

// Minimum mean as num/den with den in [1, N].
std::pair<std::int64_t, std::int64_t> karpMin(const WindowGraph& g, const std::vector<std::int64_t>& w) {
  const auto& nodes = g.nodes();
  const std::size_t n = nodes.size();
  std::vector<std::int64_t> index(static_cast<std::size_t>(g.codeCount()), -1);
  for (std::size_t i = 0; i < n; ++i) index[static_cast<std::size_t>(nodes[i])] = static_cast<std::int64_t>(i);
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> d((n + 1) * n, inf);
  for (std::size_t v = 0; v < n; ++v) d[v] = 0;
  const int a = g.alphabetSize();
  for (std::size_t j = 1; j <= n; ++j) {
    const std::int64_t* prev = d.data() + (j - 1) * n;
    std::int64_t* cur = d.data() + j * n;
    for (std::size_t ui = 0; ui < n; ++ui) {
      if (prev[ui] >= inf) continue;
      const std::int64_t u = nodes[ui];
      for (int c = 0; c < a; ++c) {
        const std::int64_t v = g.next(u, static_cast<Symbol>(c));
        if (v < 0) continue;
        const auto vi = static_cast<std::size_t>(index[static_cast<std::size_t>(v)]);
        const std::int64_t cand = prev[ui] + w[g.window(u, static_cast<Symbol>(c))];
        if (cand < cur[vi]) cur[vi] = cand;
      }
    }
  }
  bool have = false;
  std::int64_t bestNum = 0, bestDen = 1;
  const std::int64_t* last = d.data() + n * n;
  for (std::size_t v = 0; v < n; ++v) {
    if (last[v] >= inf) continue;
    bool any = false;
    std::int64_t wNum = 0, wDen = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t dj = d[j * n + v];
      if (dj >= inf) continue;
      const std::int64_t num = last[v] - dj;
      const auto den = static_cast<std::int64_t>(n - j);
      if (!any || static_cast<__int128>(num) * wDen > static_cast<__int128>(wNum) * den) {
        wNum = num;
        wDen = den;
        any = true;
      }
    }
    if (any && (!have || static_cast<__int128>(wNum) * bestDen < static_cast<__int128>(bestNum) * wDen)) {
      bestNum = wNum;
      bestDen = wDen;
      have = true;
    }
  }
  if (!have) throw Error(Errc::NotMixing, "window graph has no cycle");
  return {bestNum, bestDen};
}

}  // namespace

Rational karpMeanCycle(const WindowGraph& graph, const std::vector<std::int64_t>& weight, bool maximize) {
  const auto [num, den] = karpMin(graph, signedWeights(weight, maximize));
  Rational r(num, den);
  return maximize ? Rational(-r) : r;
}

ExtremeCycle extremeCycle(const WindowGraph& g, const std::vector<std::int64_t>& weight, bool maximize) {
  const std::vector<std::int64_t> w = signedWeights(weight, maximize);
  const auto [num, den] = karpMin(g, w);
  const int a = g.alphabetSize();
  const auto& nodes = g.nodes();
  const std::size_t codes = static_cast<std::size_t>(g.codeCount());

  // Reduced weights w·den − num have no negative cycle; Bellman-Ford potentials.
  auto reduced = [&](std::int64_t u, int c) { return w[g.window(u, static_cast<Symbol>(c))] * den - num; };
  std::vector<std::int64_t> pi(codes, 0);
  for (std::size_t iter = 0; iter <= nodes.size(); ++iter) {
    bool changed = false;
    for (std::int64_t u : nodes) {
      for (int c = 0; c < a; ++c) {
        const std::int64_t v = g.next(u, static_cast<Symbol>(c));
        if (v < 0) continue;
        const std::int64_t cand = pi[static_cast<std::size_t>(u)] + reduced(u, c);
        if (cand < pi[static_cast<std::size_t>(v)]) {
          pi[static_cast<std::size_t>(v)] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  // Tight edges; prune nodes without a tight edge into the surviving set.
  auto tight = [&](std::int64_t u, int c, std::int64_t v) {
    return pi[static_cast<std::size_t>(u)] + reduced(u, c) == pi[static_cast<std::size_t>(v)];
  };
  std::vector<char> alive(codes, 0);
  for (std::int64_t u : nodes) alive[static_cast<std::size_t>(u)] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::int64_t u : nodes) {
      if (!alive[static_cast<std::size_t>(u)]) continue;
      bool has = false;
      for (int c = 0; c < a && !has; ++c) {
        const std::int64_t v = g.next(u, static_cast<Symbol>(c));
        has = v >= 0 && alive[static_cast<std::size_t>(v)] && tight(u, c, v);
      }
      if (!has) {
        alive[static_cast<std::size_t>(u)] = 0;
        changed = true;
      }
    }
  }
  std::int64_t u = -1;
  for (std::int64_t v : nodes) {
    if (alive[static_cast<std::size_t>(v)]) {
      u = v;
      break;
    }
  }
  if (u < 0) throw Error(Errc::NotMixing, "no extreme cycle found");
  std::vector<std::int64_t> seenAt(codes, -1);
  std::vector<std::int64_t> walk;
  std::vector<Symbol> via;
  while (seenAt[static_cast<std::size_t>(u)] < 0) {
    seenAt[static_cast<std::size_t>(u)] = static_cast<std::int64_t>(walk.size());
    walk.push_back(u);
    for (int c = 0; c < a; ++c) {
      const std::int64_t v = g.next(u, static_cast<Symbol>(c));
      if (v >= 0 && alive[static_cast<std::size_t>(v)] && tight(u, c, v)) {
        via.push_back(static_cast<Symbol>(c));
        u = v;
        break;
      }
    }
  }
  const auto from = static_cast<std::size_t>(seenAt[static_cast<std::size_t>(u)]);
  ExtremeCycle out;
  out.nodes.assign(walk.begin() + static_cast<std::ptrdiff_t>(from), walk.end());
  out.symbols.assign(via.begin() + static_cast<std::ptrdiff_t>(from), via.end());
  Rational mean(num, den);
  out.mean = maximize ? Rational(-mean) : mean;
  return out;
}

}  // namespace sparsetail
