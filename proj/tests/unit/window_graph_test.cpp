#include <gtest/gtest.h>

#include "cycle_oracle.hpp"
#include "sparsetail/window_graph.hpp"

using namespace sparsetail;

TEST(WindowGraph, NodesAndTransitions) {
  const Sft g = buildSftForbidden(2, {Word{1, 1}});
  const WindowGraph w1(g, 1);
  EXPECT_EQ(w1.history(), 1);
  EXPECT_EQ(w1.nodes(), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(w1.next(1, 1), -1);
  EXPECT_EQ(w1.next(1, 0), 0);
  EXPECT_EQ(w1.window(1, 0), 0u);

  const WindowGraph w3(g, 3);
  EXPECT_EQ(w3.history(), 2);
  EXPECT_EQ(w3.nodes(), (std::vector<std::int64_t>{0, 1, 2}));  // 00, 01, 10
  EXPECT_EQ(w3.next(1, 0), 2);
  EXPECT_EQ(w3.next(1, 1), -1);
  EXPECT_EQ(w3.window(2, 1), 5u);  // 101
  EXPECT_EQ(w3.symbols(2), (Word{1, 0}));
  const Word tail{0, 1, 0};
  EXPECT_EQ(w3.nodeOf(tail.data(), 3), 2);
}

TEST(ScaledPotential, IntegerWeights) {
  const Sft s = fullShift(2);
  const Potential phi(s, 1, {{Word{0}, Rational(1, 2)}, {Word{1}, Rational(-1, 3)}});
  const ScaledPotential sp(phi);
  EXPECT_EQ(sp.q, 6);
  EXPECT_EQ(sp.weight, (std::vector<std::int64_t>{3, -2}));
  EXPECT_EQ(sp.maxAbs, 3);
}

TEST(KarpMeanCycle, MatchesOracleAndWitness) {
  const Sft s = buildSftForbidden(3, {Word{0, 0}, Word{1, 2}});
  std::map<Word, Rational> table;
  int v = 3;
  for (const Word& x : legalWords(s, 2)) {
    table[x] = Rational(v % 7 - 3);
    v = v * 5 + 1;
  }
  const Potential phi(s, 2, table);
  const WindowGraph g(s, 2);
  const ScaledPotential sp(phi);
  const auto [olo, ohi] = oracle::simpleCycleRange(
      3, 2, [&](int a, int b) { return s.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b)); },
      [&](const std::vector<int>& win) { return oracle::Q(phi.value(Word(win.begin(), win.end()))); });
  EXPECT_EQ(karpMeanCycle(g, sp.weight, false), olo * sp.q);
  EXPECT_EQ(karpMeanCycle(g, sp.weight, true), ohi * sp.q);
  for (bool maximize : {false, true}) {
    const ExtremeCycle c = extremeCycle(g, sp.weight, maximize);
    ASSERT_FALSE(c.nodes.empty());
    ASSERT_EQ(c.nodes.size(), c.symbols.size());
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      const std::int64_t to = g.next(c.nodes[i], c.symbols[i]);
      EXPECT_EQ(to, c.nodes[(i + 1) % c.nodes.size()]);
      sum += sp.weight[g.window(c.nodes[i], c.symbols[i])];
    }
    EXPECT_EQ(Rational(sum, static_cast<std::int64_t>(c.nodes.size())), c.mean);
    EXPECT_EQ(c.mean, maximize ? ohi * sp.q : olo * sp.q);
  }
}
