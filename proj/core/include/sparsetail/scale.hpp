#pragma once

#include <cstdint>
#include <vector>

#include "sparsetail/rational.hpp"

namespace sparsetail {

/// T_n = κ_n·T_{n-1}. Index 0 of `lengths` is t0; factors[n-1] is κ_n.
struct Scale {
  std::int64_t t0 = 0;
  std::vector<std::int64_t> factors;
  std::vector<std::int64_t> lengths;

  int depth() const { return static_cast<int>(factors.size()); }
  std::int64_t length(int n) const { return lengths.at(static_cast<std::size_t>(n)); }
  std::int64_t factor(int n) const { return factors.at(static_cast<std::size_t>(n - 1)); }

  /// The first `depth` factors, rebuilt.
  Scale truncated(int depth) const;

  bool operator==(const Scale&) const = default;
};

Scale buildScale(std::int64_t t0, std::vector<std::int64_t> factors);

struct ControllingSequence {
  std::vector<Rational> eps;  // eps[n-1] = ε_n
  Rational partialSum;
  Rational partialProduct;  // Π (1 − ε_n)
};

ControllingSequence controllingSequence(const Scale& scale);

struct ControlParams {
  std::vector<Rational> alpha;      // α_0..α_D
  std::vector<Rational> beta;       // β_0..β_{D-1}
  std::vector<int> densityDepth;    // m_0..m_D
  Rational target{0};

  int depth() const { return static_cast<int>(alpha.size()) - 1; }
  /// Same parameters cut to depth `d`.
  ControlParams truncated(int d) const;
};

/// Throws InvalidParams naming the first violated inequality.
void validateParams(const ControlParams& params);

/// α_n = α_0·decay^n, β_n = betaFraction·α_n. `density` is padded with its
/// last value (or 0) up to depth D.
ControlParams geometricParams(int depth, const Rational& alpha0, const Rational& decay,
                              const Rational& betaFraction, std::vector<int> density,
                              const Rational& target);

/// Smallest factors with κ_{n+1} ≥ ⌈8·max(phiRange, α_n)/α_{n+1}⌉ + ⌈2·soj_n/T_n⌉ + 2,
/// κ ≥ 3 and strictly increasing. Missing sojourn lengths count as 0.
std::vector<std::int64_t> minimalFactors(const ControlParams& params, const Rational& phiRange,
                                         const std::vector<std::int64_t>& sojournLengths,
                                         std::int64_t t0, std::int64_t cap = 1'000'000);

}  // namespace sparsetail
