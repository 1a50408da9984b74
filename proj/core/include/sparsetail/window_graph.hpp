#pragma once

#include <cstdint>
#include <vector>

#include "sparsetail/sft.hpp"

namespace sparsetail {

/// Walks over an Sft read through windows of a depth-k potential. Nodes are
/// legal h-words with h = max(k−1, 1), coded in base A; appending symbol c to
/// node u completes the window (u·A + c) mod A^k.
class WindowGraph {
 public:
  WindowGraph(const Sft& sft, int depth);

  int alphabetSize() const { return a_; }
  int depth() const { return k_; }
  int history() const { return h_; }
  std::int64_t codeCount() const { return codes_; }
  bool isNode(std::int64_t node) const { return legal_[static_cast<std::size_t>(node)] != 0; }
  const std::vector<std::int64_t>& nodes() const { return nodes_; }

  /// −1 when the transition is illegal.
  std::int64_t next(std::int64_t node, Symbol c) const {
    return next_[static_cast<std::size_t>(node) * static_cast<std::size_t>(a_) + c];
  }
  std::size_t window(std::int64_t node, Symbol c) const {
    return static_cast<std::size_t>((node * a_ + c) % windowCodes_);
  }
  Symbol lastSymbol(std::int64_t node) const { return static_cast<Symbol>(node % a_); }
  /// The h symbols of a node, oldest first.
  Word symbols(std::int64_t node) const;
  std::int64_t nodeOf(const Symbol* last, int count) const;

  const Sft& sft() const { return *sft_; }

 private:
  const Sft* sft_;
  int a_, k_, h_;
  std::int64_t codes_ = 0;
  std::int64_t windowCodes_ = 0;
  std::vector<char> legal_;
  std::vector<std::int64_t> nodes_;
  std::vector<std::int64_t> next_;
};

/// Potential scaled to integers: weight = value·scale.
struct ScaledPotential {
  BigInt scale;
  std::int64_t q = 1;
  std::vector<std::int64_t> weight;  // by window code; 0 on illegal windows
  std::int64_t maxAbs = 0;

  ScaledPotential() = default;
  explicit ScaledPotential(const Potential& potential);
};

/// Mean cycle extremum and one cycle achieving it.
struct ExtremeCycle {
  Rational mean;                       // in units of the scaled weights
  std::vector<std::int64_t> nodes;     // cycle nodes in order
  std::vector<Symbol> symbols;         // symbols[i] leads nodes[i] -> nodes[i+1]
};

/// Karp's minimum mean cycle (maximum when `maximize`).
Rational karpMeanCycle(const WindowGraph& graph, const std::vector<std::int64_t>& weight, bool maximize);
ExtremeCycle extremeCycle(const WindowGraph& graph, const std::vector<std::int64_t>& weight, bool maximize);

}  // namespace sparsetail
