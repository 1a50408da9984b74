#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "sparsetail/pattern.hpp"
#include "sparsetail/scale.hpp"
#include "sparsetail/sft.hpp"
#include "sparsetail/tail.hpp"
#include "sparsetail/window_graph.hpp"

namespace sparsetail {

enum class Sign : int { Minus = -1, Plus = 1 };

inline Sign opposite(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline char signChar(Sign s) { return s == Sign::Plus ? '+' : '-'; }

struct Band {
  Rational lo;
  Rational hi;
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

/// ω·[α_n/2, α_n].
Band signBand(const ControlParams& params, int level, Sign omega);

struct BlockSpec {
  enum class Kind { SignBlock, Sojourn };
  int level = 0;
  Kind kind = Kind::SignBlock;
  Sign omega = Sign::Plus;
  int density = 0;  // m for sojourns, m_0 for dense level-0 walk cells
  Band band;
};

/// Uniformization rule for the next sub-block of a level-(n+1) block:
/// steering +, pick + iff the history average is at most (5/6)·α_{n+1}.
/// Mirrored when steering −. Ties go to the steering sign.
Sign chooseSign(const Rational& historyAverage, std::int64_t historyLength, int level,
                const ControlParams& params, Sign steering = Sign::Plus);

/// Nodes with an exact r-step walk into a target set.
class ReachTable {
 public:
  ReachTable() = default;
  ReachTable(const WindowGraph& graph, const std::vector<char>& target);

  bool contains(std::int64_t steps, std::int64_t node) const {
    const auto& level = steps < static_cast<std::int64_t>(levels_.size())
                            ? levels_[static_cast<std::size_t>(steps)]
                            : levels_.back();
    return level[static_cast<std::size_t>(node)] != 0;
  }
  /// Steps after which the table no longer changes.
  std::int64_t radius() const { return static_cast<std::int64_t>(levels_.size()) - 1; }
  bool stableIsAll() const { return stableAll_; }

 private:
  std::vector<std::vector<char>> levels_;
  bool stableAll_ = false;
};

struct BlockResult {
  Word symbols;
  std::int64_t endState = -1;
  std::int64_t sum = 0;  // in units of 1/scale
};

struct GeneratorOptions {
  /// Restrict block end states to the closed good set G; otherwise any node.
  bool closeStates = true;
  /// Precomputed universal words by order, e.g. loaded from a cache.
  std::map<int, Word> universals;
};

/// Memoized generator for sign and sojourn blocks over the window graph of the
/// shifted potential. Thread safe: concurrent callers share one cache and each
/// key is stored once.
class BlockGenerator {
 public:
  BlockGenerator(const Sft& sft, const Potential& shifted, const Scale& scale,
                 const ControlParams& params, GeneratorOptions options = {});

  const WindowGraph& graph() const { return graph_; }
  const ScaledPotential& weights() const { return weights_; }
  std::int64_t scaleFactor() const { return weights_.q; }
  /// Ascending good states; throws BandUnreachable from the constructor if empty.
  const std::vector<std::int64_t>& goodStates() const { return good_; }
  bool isGood(std::int64_t node) const { return goodMask_[static_cast<std::size_t>(node)] != 0; }
  std::int64_t origin() const { return good_.front(); }

  /// Integer sum band for a block of `length` symbols at `level`.
  std::pair<std::int64_t, std::int64_t> sumBand(int level, Sign omega, std::int64_t length) const;

  /// T_0 symbols from `state`; `dense` additionally demands every legal
  /// m_0-word inside the covered T_0 coordinates.
  const BlockResult& signBlock(std::int64_t state, Sign omega, bool dense);
  /// T_n symbols: connector, universal word of order m_n, steered filler.
  const BlockResult& sojournBlock(int level, Sign omega, std::int64_t state);
  /// A walk of exactly `length` steps from `state` into the end set with sum in [lo, hi].
  BlockResult steer(std::int64_t state, std::int64_t length, std::int64_t lo, std::int64_t hi) const;

  const Word& universal(int m);
  const Scale& scale() const { return scale_; }
  const ControlParams& params() const { return params_; }

 private:
  std::optional<BlockResult> searchBlock(std::int64_t state, std::int64_t length, std::int64_t lo,
                                         std::int64_t hi, int densityM, const ReachTable& reach,
                                         std::int64_t budget) const;
  BlockResult computeSign(std::int64_t state, Sign omega, bool dense) const;
  BlockResult computeSojourn(int level, Sign omega, std::int64_t state);
  void computeGoodStates();
  void buildPolicies();
  std::int64_t stepNode(std::int64_t node, Symbol c) const;
  std::int64_t stepWeight(std::int64_t node, Symbol c) const;

  const Sft& sft_;
  Scale scale_;
  ControlParams params_;
  GeneratorOptions options_;
  WindowGraph graph_;
  ScaledPotential weights_;
  std::int64_t minStep_ = 0;
  std::int64_t maxStep_ = 0;
  std::vector<char> goodMask_;
  std::vector<std::int64_t> good_;
  ReachTable reach_;
  // policy_[0] steers toward the minimum-mean cycle, policy_[1] toward the maximum.
  std::vector<int> policy_[2];
  int policyStart_[2] = {0, 0};

  std::mutex mutex_;
  std::map<std::tuple<std::int64_t, int, bool>, std::unique_ptr<BlockResult>> signCache_;
  std::map<std::tuple<int, int, std::int64_t>, std::unique_ptr<BlockResult>> sojournCache_;
  std::map<int, Word> universalCache_;
};

/// Free-standing sign block of length t0 after `entryContext` (the last k−1
/// symbols, or up to one symbol for k = 1). A nonempty `exitClass` requires the
/// last symbol to be able to precede each of its symbols.
Word signBlock(const Sft& sft, const Potential& shifted, const ControlParams& params, std::int64_t t0,
               Sign omega, const Word& entryContext, const std::vector<Symbol>& exitClass = {});

/// Free-standing level-n sojourn block of length T_n.
Word sojournBlock(const Sft& sft, const Potential& shifted, const ControlParams& params,
                  const Scale& scale, int level, Sign omega, const Word& entryContext);

struct CellRecord {
  std::int64_t start = 0;
  int level = 0;
  CellKind kind = CellKind::Rest;
  Sign omega = Sign::Plus;
  std::int64_t sum = 0;  // scaled
};

/// A composite good block [start, start + T_level) with level >= 1.
struct BlockRecord {
  std::int64_t start = 0;
  int level = 0;
  Sign omega = Sign::Plus;
  std::int64_t sum = 0;
};

struct SynthesisLedger {
  Word prefix;             // T_D + k − 1 symbols
  std::int64_t horizon = 0;
  int contextLength = 0;   // k − 1
  int alphabetSize = 0;
  std::int64_t scale = 1;  // sums are in units of 1/scale
  Rational target{0};
  std::vector<std::int64_t> lengths;  // T_0..T_D
  std::vector<CellRecord> cells;      // ordered by start; the initial pattern
  std::vector<BlockRecord> blocks;    // ordered by end, then level

  std::int64_t length(int level) const { return lengths.at(static_cast<std::size_t>(level)); }
  Rational average(std::int64_t sum, int level) const {
    return Rational(BigInt(sum), BigInt(scale) * length(level));
  }
};

/// Prefix of the controlled point for the initial pattern of `tail`.
/// Throws TargetOutOfRange unless params.target is strictly inside averageRange.
SynthesisLedger synthesize(const Sft& sft, const Potential& potential, const Scale& scale,
                           const SparseTail& tail, const ControlParams& params,
                           const GeneratorOptions& options = {});

}  // namespace sparsetail
