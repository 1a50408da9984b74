#pragma once

#include <cstdint>
#include <vector>

#include "sparsetail/tail.hpp"

namespace sparsetail {

enum class CellKind { Rest, Walk };

inline char cellKindChar(CellKind k) { return k == CellKind::Rest ? 'r' : 'w'; }

struct Cell {
  std::int64_t start = 0;  // absolute coordinate
  int level = 0;
  CellKind kind = CellKind::Rest;

  bool operator==(const Cell&) const = default;
};

/// A T_n-pattern of [baseStart, baseStart + T_n): an r/w partition into
/// aligned cells of levels 0..n.
class Pattern {
 public:
  Pattern() = default;
  /// `lengths` is T_0..T_n. Throws InvalidPattern when the cells do not
  /// partition the base or break the level/kind rules.
  Pattern(std::vector<std::int64_t> lengths, std::int64_t baseStart, std::vector<Cell> cells);

  int level() const { return static_cast<int>(lengths_.size()) - 1; }
  std::int64_t baseStart() const { return baseStart_; }
  std::int64_t baseEnd() const { return baseStart_ + lengths_.back(); }
  std::int64_t length(int i) const { return lengths_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::int64_t>& lengths() const { return lengths_; }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Index of the cell containing absolute coordinate j.
  std::size_t cellIndexAt(std::int64_t j) const;
  const Cell& cellAt(std::int64_t j) const { return cells_[cellIndexAt(j)]; }
  std::int64_t cellLength(const Cell& c) const { return length(c.level); }

  /// [start, start + T_i) is aligned, inside the base, and not strictly inside a cell.
  bool isAdmissible(std::int64_t start, int i) const;
  bool isTrivial() const;

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<std::int64_t> lengths_;
  std::int64_t baseStart_ = 0;
  std::vector<Cell> cells_;
};

/// Throws NotGoodInterval unless [k·T_n, (k+1)·T_n) is n-good.
Pattern inducedPattern(const SparseTail& tail, int n, std::int64_t k);
Pattern initialPattern(const SparseTail& tail, int n);

/// Initial points plus the right endpoint of the base, ascending.
std::vector<std::int64_t> markedPoints(const Pattern& pattern);

/// The T_i-subpattern on [baseStart, baseStart + T_i). Throws NotAdmissible.
Pattern restrictToInitial(const Pattern& pattern, int i);

}  // namespace sparsetail
