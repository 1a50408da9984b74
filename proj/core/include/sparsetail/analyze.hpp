#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsetail/scale.hpp"
#include "sparsetail/sft.hpp"
#include "sparsetail/synth.hpp"
#include "sparsetail/tail.hpp"

namespace sparsetail {

struct AverageViolation {
  std::int64_t start = 0;
  int level = 0;
  Rational average;  // of φ − t
};

struct DensityViolation {
  std::int64_t start = 0;
  int level = 0;
  Word missing;  // first absent legal m_level-word
};

struct LegalityViolation {
  std::int64_t position = 0;  // x[position]·x[position+1] is forbidden
};

struct LedgerViolation {
  std::int64_t start = 0;
  int level = 0;
  std::string what;
};

struct ControlStats {
  std::int64_t prefixLength = 0;
  std::int64_t intervalsChecked = 0;
  std::int64_t componentsChecked = 0;
  std::int64_t recordsChecked = 0;
  Rational finalAverage;  // of φ − t over [0, T_D)
  std::int64_t averageViolations = 0;
  std::int64_t densityViolations = 0;
  std::int64_t legalityViolations = 0;
  std::int64_t ledgerViolations = 0;
};

struct ControlReport {
  std::vector<AverageViolation> averageViolations;
  std::vector<DensityViolation> densityViolations;
  std::vector<LegalityViolation> legalityViolations;
  std::vector<LedgerViolation> ledgerViolations;
  ControlStats stats;

  bool clean() const {
    return stats.averageViolations == 0 && stats.densityViolations == 0 && stats.legalityViolations == 0 &&
           stats.ledgerViolations == 0;
  }
};

struct VerifyOptions {
  /// Only intervals, components and records meeting [first, last) are checked.
  std::optional<std::pair<std::int64_t, std::int64_t>> range;
  /// Listed violations per kind; counts in ControlStats are always complete.
  std::size_t maxListed = 1000;
};

/// Checks control of every aligned interval not inside R_{n+1,∞}, density of
/// every component, and legality of the prefix. With a ledger, also recomputes
/// every record from the prefix.
ControlReport verifyControl(const Sft& sft, const Word& prefix, const SparseTail& tail,
                            const ControlParams& params, const Potential& potential,
                            const VerifyOptions& options = {});
ControlReport verifyControl(const Sft& sft, const Word& prefix, const SparseTail& tail,
                            const ControlParams& params, const Potential& potential,
                            const SynthesisLedger& ledger, const VerifyOptions& options = {});

struct EmpiricalMeasure {
  std::int64_t length = 0;
  int order = 0;
  int alphabetSize = 0;
  std::map<Word, std::int64_t> counts;  // frequency = count / length

  Rational frequency(const Word& w) const;
  std::size_t supportSize() const { return counts.size(); }
  Rational total() const;
};

/// Counts the m-windows starting in [0, length) that fit inside the prefix;
/// `length` of the result is the number of windows counted.
EmpiricalMeasure empiricalMeasure(const Word& prefix, int alphabetSize, std::int64_t length, int order);
Rational integratePotential(const EmpiricalMeasure& measure, const Potential& potential);
/// support / #legal m-words.
Rational coverage(const EmpiricalMeasure& measure, const Sft& sft);

struct ClaimReport {
  std::string claim;
  std::int64_t window = 0;
  std::int64_t checked = 0;
  std::int64_t excluded = 0;
  std::int64_t violations = 0;
  std::vector<std::int64_t> examples;  // first offending start indices
  std::string detail;

  bool clean() const { return violations == 0; }
};

/// Every [i, i+t] with i outside ∪_{ℓ≥m_t}(R_ℓ ∪ (R_ℓ − T_{k+1})) must contain all legal m_k-words.
ClaimReport verifyDensityClaim(const Sft& sft, const Word& prefix, const SparseTail& tail,
                               const ControlParams& params, int k, std::int64_t t);

/// C = α_k / (2(max|φ−t| + α_k)).
Rational averageClaimConstant(const ControlParams& params, const Potential& potential, int k);
/// ⌈2·T_m/C + 1⌉.
std::int64_t averageClaimWindow(const SparseTail& tail, const ControlParams& params,
                                const Potential& potential, int k, int m);

/// If |average of φ−t over [i, i+t)| > 2α_k then i or i+t lies in ∪_{ℓ≥m} R_ℓ.
ClaimReport verifyAverageClaim(const Sft& sft, const Word& prefix, const SparseTail& tail,
                               const ControlParams& params, const Potential& potential, int k, int m,
                               std::int64_t t);

/// Finite-scale consequences at (k, n), n ≥ k + 1: |φ_{T_n} − t| ≤ 3α_k and
/// [0, T_n) contains every legal (m_k − 1)-word.
struct ConsequenceCheck {
  int k = 0;
  int n = 0;
  Rational average;
  bool averageOk = false;
  bool densityOk = false;
};

std::vector<ConsequenceCheck> finiteScaleConsequences(const Sft& sft, const Word& prefix,
                                                      const SparseTail& tail, const ControlParams& params,
                                                      const Potential& potential);

struct CheckpointRow {
  std::int64_t checkpoint = 0;
  Rational average;   // of φ over [0, checkpoint)
  Rational coverage;  // fraction of legal m-words seen among complete windows starting in [0, checkpoint)
};

/// Checkpoints at every T_n plus `perLevel` evenly spaced points between them.
std::vector<CheckpointRow> checkpointSeries(const Sft& sft, const Word& prefix, const SparseTail& tail,
                                            const Potential& potential, int order, int perLevel = 4);

}  // namespace sparsetail
