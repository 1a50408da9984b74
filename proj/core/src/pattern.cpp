#include "sparsetail/pattern.hpp"

#include <algorithm>
#include <string>

#include "sparsetail/error.hpp"

namespace sparsetail {

Pattern::Pattern(std::vector<std::int64_t> lengths, std::int64_t baseStart, std::vector<Cell> cells)
    : lengths_(std::move(lengths)), baseStart_(baseStart), cells_(std::move(cells)) {
  if (lengths_.empty()) throw Error(Errc::InvalidPattern, "pattern needs at least T_0");
  for (std::size_t i = 1; i < lengths_.size(); ++i) {
    if (lengths_[i] <= 0 || lengths_[i] % lengths_[i - 1] != 0) {
      throw Error(Errc::InvalidPattern, "lengths do not form a divisibility chain");
    }
  }
  const std::int64_t top = lengths_.back();
  if (baseStart_ < 0 || baseStart_ % top != 0) {
    throw Error(Errc::InvalidPattern, "base start " + std::to_string(baseStart_) +
                                          " is not a multiple of T_n = " + std::to_string(top));
  }
  std::int64_t cursor = baseStart_;
  for (const Cell& c : cells_) {
    const std::string where = "cell at " + std::to_string(c.start);
    if (c.level < 0 || c.level > level()) {
      throw Error(Errc::InvalidPattern, where + " has level " + std::to_string(c.level));
    }
    if (c.start != cursor) {
      throw Error(Errc::InvalidPattern, where + " does not continue the partition at " +
                                            std::to_string(cursor));
    }
    if (c.start % length(c.level) != 0) {
      throw Error(Errc::InvalidPattern, where + " is not aligned to T_" + std::to_string(c.level));
    }
    if (c.kind == CellKind::Rest && c.level != 0) {
      throw Error(Errc::InvalidPattern, where + ": r cells must have level 0");
    }
    cursor += length(c.level);
  }
  if (cursor != baseEnd()) {
    throw Error(Errc::InvalidPattern, "cells cover up to " + std::to_string(cursor) +
                                          ", base ends at " + std::to_string(baseEnd()));
  }
}

std::size_t Pattern::cellIndexAt(std::int64_t j) const {
  if (j < baseStart_ || j >= baseEnd()) {
    throw Error(Errc::OutOfRange, "coordinate " + std::to_string(j) + " outside the pattern base");
  }
  auto it = std::upper_bound(cells_.begin(), cells_.end(), j,
                             [](std::int64_t v, const Cell& c) { return v < c.start; });
  return static_cast<std::size_t>(it - cells_.begin()) - 1;
}

bool Pattern::isAdmissible(std::int64_t start, int i) const {
  if (i < 0 || i > level()) return false;
  if (start < baseStart_ || start % length(i) != 0 || start + length(i) > baseEnd()) return false;
  return cellAt(start).level <= i;
}

bool Pattern::isTrivial() const {
  return cells_.size() == 1 && cells_[0].kind == CellKind::Walk && cells_[0].level == level();
}

Pattern inducedPattern(const SparseTail& tail, int n, std::int64_t k) {
  if (tail.classify(k, n) != IntervalClass::Good) {
    throw Error(Errc::NotGoodInterval, "[" + std::to_string(k) + "·T_" + std::to_string(n) +
                                           ", ...) is not " + std::to_string(n) + "-good");
  }
  const Scale& scale = tail.scale();
  const std::int64_t base = k * scale.length(n);
  const std::int64_t end = base + scale.length(n);
  const std::int64_t t0 = scale.length(0);

  std::vector<Cell> walks;
  for (int level = 0; level < n; ++level) {
    const auto& s = tail.starts(level);
    for (auto it = std::lower_bound(s.begin(), s.end(), base); it != s.end() && *it < end; ++it) {
      walks.push_back({*it, level, CellKind::Walk});
    }
  }
  std::sort(walks.begin(), walks.end(), [](const Cell& a, const Cell& b) { return a.start < b.start; });

  std::vector<Cell> cells;
  std::int64_t cursor = base;
  auto fill = [&](std::int64_t upto) {
    for (; cursor < upto; cursor += t0) cells.push_back({cursor, 0, CellKind::Rest});
  };
  for (const Cell& w : walks) {
    fill(w.start);
    cells.push_back(w);
    cursor = w.start + scale.length(w.level);
  }
  fill(end);
  std::vector<std::int64_t> lengths(scale.lengths.begin(), scale.lengths.begin() + n + 1);
  return Pattern(std::move(lengths), base, std::move(cells));
}

Pattern initialPattern(const SparseTail& tail, int n) { return inducedPattern(tail, n, 0); }

std::vector<std::int64_t> markedPoints(const Pattern& pattern) {
  std::vector<std::int64_t> points;
  points.reserve(pattern.cells().size() + 1);
  for (const Cell& c : pattern.cells()) points.push_back(c.start);
  points.push_back(pattern.baseEnd());
  return points;
}

Pattern restrictToInitial(const Pattern& pattern, int i) {
  if (!pattern.isAdmissible(pattern.baseStart(), i)) {
    throw Error(Errc::NotAdmissible, "initial T_" + std::to_string(i) +
                                         "-interval is strictly inside a cell");
  }
  const std::int64_t end = pattern.baseStart() + pattern.length(i);
  std::vector<Cell> cells;
  for (const Cell& c : pattern.cells()) {
    if (c.start >= end) break;
    cells.push_back(c);
  }
  std::vector<std::int64_t> lengths(pattern.lengths().begin(), pattern.lengths().begin() + i + 1);
  return Pattern(std::move(lengths), pattern.baseStart(), std::move(cells));
}

}  // namespace sparsetail
