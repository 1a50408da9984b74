#include <gtest/gtest.h>

#include <random>

#include "sparsetail/error.hpp"
#include "sparsetail/pattern.hpp"

using namespace sparsetail;

namespace {

SparseTail exampleTail(int depth) { return buildTail(buildScale(3, {3, 6, 18}), depth); }

std::vector<Cell> cellsOf(std::initializer_list<std::tuple<std::int64_t, int, char>> list) {
  std::vector<Cell> out;
  for (const auto& [s, l, k] : list) out.push_back({s, l, k == 'r' ? CellKind::Rest : CellKind::Walk});
  return out;
}

/// Brute-force admissibility: [j, j+T_i) is aligned, inside the base, and not
/// strictly inside any cell.
bool admissibleScan(const Pattern& p, std::int64_t j, int i) {
  const std::int64_t len = p.length(i);
  if (j % len != 0 || j < p.baseStart() || j + len > p.baseEnd()) return false;
  for (const Cell& c : p.cells()) {
    const std::int64_t cs = c.start, ce = c.start + p.length(c.level);
    const bool inside = cs <= j && j + len <= ce;
    if (inside && !(cs == j && ce == j + len)) return false;
  }
  return true;
}

}  // namespace

TEST(Pattern, InducedExamples) {
  const SparseTail tail = exampleTail(2);
  EXPECT_EQ(inducedPattern(tail, 1, 0).cells(), cellsOf({{0, 0, 'r'}, {3, 0, 'w'}, {6, 0, 'r'}}));
  const Pattern p2 = inducedPattern(tail, 2, 0);
  std::vector<std::int64_t> w0;
  int w1 = 0, r = 0;
  for (const Cell& c : p2.cells()) {
    if (c.kind == CellKind::Walk && c.level == 0) w0.push_back(c.start);
    if (c.kind == CellKind::Walk && c.level == 1) {
      EXPECT_EQ(c.start, 18);
      ++w1;
    }
    if (c.kind == CellKind::Rest) ++r;
  }
  EXPECT_EQ(w0, (std::vector<std::int64_t>{3, 12, 30, 39, 48}));
  EXPECT_EQ(w1, 1);
  EXPECT_EQ(r, (54 - 9 - 15) / 3);
  try {
    inducedPattern(tail, 1, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotGoodInterval);
  }
}

TEST(Pattern, InitialPatterns) {
  const SparseTail tail = exampleTail(2);
  EXPECT_EQ(initialPattern(tail, 0).cells(), cellsOf({{0, 0, 'r'}}));
  EXPECT_EQ(initialPattern(tail, 1), inducedPattern(tail, 1, 0));
  EXPECT_EQ(initialPattern(tail, 2), inducedPattern(tail, 2, 0));
}

TEST(Pattern, MarkedPointExamples) {
  const SparseTail tail = exampleTail(2);
  EXPECT_EQ(markedPoints(initialPattern(tail, 1)), (std::vector<std::int64_t>{0, 3, 6, 9}));
  std::vector<std::int64_t> want;
  for (std::int64_t j = 0; j < 54; j += 3)
    if (j != 21 && j != 24) want.push_back(j);
  want.push_back(54);
  EXPECT_EQ(markedPoints(initialPattern(tail, 2)), want);

  const Pattern trivial({3, 9}, 9, cellsOf({{9, 1, 'w'}}));
  EXPECT_TRUE(trivial.isTrivial());
  EXPECT_EQ(markedPoints(trivial), (std::vector<std::int64_t>{9, 18}));
}

TEST(Pattern, MarkedPointsAreAdmissibleStarts) {
  const SparseTail tail = exampleTail(3);
  for (int n = 0; n <= 3; ++n) {
    const Pattern p = initialPattern(tail, n);
    const auto marks = markedPoints(p);
    std::set<std::int64_t> markSet(marks.begin(), marks.end());
    for (std::int64_t j = 0; j < p.baseEnd(); j += 3) {
      bool any = false;
      for (int i = 0; i <= n; ++i) {
        const bool adm = admissibleScan(p, j, i);
        EXPECT_EQ(p.isAdmissible(j, i), adm) << j << " " << i;
        if (adm) {
          EXPECT_TRUE(markSet.count(j + p.length(i))) << "end of admissible interval unmarked";
          any = true;
        }
      }
      EXPECT_EQ(markSet.count(j) > 0, any) << j;
    }
    EXPECT_TRUE(markSet.count(p.baseEnd()));
  }
}

TEST(Pattern, RestrictionExamples) {
  const SparseTail tail = exampleTail(2);
  EXPECT_EQ(restrictToInitial(initialPattern(tail, 2), 1), initialPattern(tail, 1));
  EXPECT_EQ(restrictToInitial(initialPattern(tail, 2), 2), initialPattern(tail, 2));
  const Pattern wide({3, 9, 54}, 0, cellsOf({{0, 2, 'w'}}));
  try {
    restrictToInitial(wide, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAdmissible);
  }
}

TEST(Pattern, CompatibilityOnRandomScales) {
  std::mt19937 rng(2024);
  int done = 0;
  while (done < 50) {
    const std::int64_t t0 = 3 * std::uniform_int_distribution<int>(1, 2)(rng);
    const int depth = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<std::int64_t> f;
    std::int64_t k = std::uniform_int_distribution<int>(5, 9)(rng);
    for (int i = 0; i < depth; ++i) {
      f.push_back(k);
      k += std::uniform_int_distribution<int>(1, 5)(rng);
    }
    const Scale s = buildScale(t0, f);
    if (s.length(depth) > 200'000) continue;
    const SparseTail tail = buildTail(s, depth);
    for (int n = 0; n < depth; ++n) {
      EXPECT_EQ(restrictToInitial(initialPattern(tail, n + 1), n), initialPattern(tail, n));
    }
    ++done;
  }
}

TEST(Pattern, ConcatenationStructure) {
  const SparseTail tail = exampleTail(3);
  for (int n = 1; n <= 3; ++n) {
    const Pattern p = initialPattern(tail, n);
    if (p.isTrivial()) continue;
    // Cells group exactly into κ_n sub-bases of level n − 1.
    const std::int64_t sub = p.length(n - 1);
    for (const Cell& c : p.cells()) {
      EXPECT_LT(c.level, n);
      EXPECT_EQ(c.start / sub, (c.start + p.length(c.level) - 1) / sub);
    }
  }
}

TEST(Pattern, RejectsBrokenPartitions) {
  auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Config;
  };
  EXPECT_EQ(code([] { Pattern({3, 9}, 0, cellsOf({{0, 0, 'r'}, {3, 0, 'r'}})); }), Errc::InvalidPattern);
  EXPECT_EQ(code([] { Pattern({3, 9}, 0, cellsOf({{0, 1, 'r'}})); }), Errc::InvalidPattern);
  EXPECT_EQ(code([] { Pattern({3, 9}, 0, cellsOf({{0, 0, 'r'}, {6, 0, 'r'}, {3, 0, 'w'}})); }), Errc::InvalidPattern);
  EXPECT_EQ(code([] { Pattern({3, 9}, 1, cellsOf({{1, 1, 'w'}})); }), Errc::InvalidPattern);
  EXPECT_EQ(code([] { Pattern({3, 9, 54}, 0, cellsOf({{0, 1, 'w'}, {9, 2, 'w'}})); }), Errc::InvalidPattern);
}
