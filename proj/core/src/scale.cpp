#include "sparsetail/scale.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sparsetail/error.hpp"

namespace sparsetail {

Scale buildScale(std::int64_t t0, std::vector<std::int64_t> factors) {
  if (t0 <= 0) {
    throw Error(Errc::InvalidParams, "t0 must be positive, got " + std::to_string(t0));
  }
  if (t0 % 3 != 0) {
    throw Error(Errc::NotMultipleOf3, "t0 = " + std::to_string(t0) + " is not a multiple of 3");
  }
  Scale scale;
  scale.t0 = t0;
  scale.lengths.push_back(t0);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::int64_t kappa = factors[i];
    if (kappa < 3) {
      throw Error(Errc::FactorTooSmall,
                  "kappa_" + std::to_string(i + 1) + " = " + std::to_string(kappa) + " < 3");
    }
    if (i > 0 && kappa <= factors[i - 1]) {
      throw Error(Errc::RatioNotIncreasing, "kappa_" + std::to_string(i + 1) + "/kappa_" +
                                                std::to_string(i) + " = " + std::to_string(kappa) +
                                                "/" + std::to_string(factors[i - 1]) + " <= 1");
    }
    const std::int64_t prev = scale.lengths.back();
    if (prev > std::numeric_limits<std::int64_t>::max() / kappa) {
      throw Error(Errc::Overflow, "T_" + std::to_string(i + 1) + " overflows 64 bits");
    }
    scale.lengths.push_back(prev * kappa);
  }
  scale.factors = std::move(factors);
  return scale;
}

Scale Scale::truncated(int d) const {
  if (d < 0 || d > depth()) {
    throw Error(Errc::OutOfRange, "depth " + std::to_string(d) + " exceeds scale depth " +
                                      std::to_string(depth()));
  }
  return buildScale(t0, std::vector<std::int64_t>(factors.begin(), factors.begin() + d));
}

ControllingSequence controllingSequence(const Scale& scale) {
  ControllingSequence seq;
  seq.partialSum = 0;
  seq.partialProduct = 1;
  for (std::int64_t kappa : scale.factors) {
    Rational e(2, kappa);
    seq.partialSum += e;
    seq.partialProduct *= Rational(1) - e;
    seq.eps.push_back(std::move(e));
  }
  return seq;
}

ControlParams ControlParams::truncated(int d) const {
  if (d < 0 || d > depth()) {
    throw Error(Errc::OutOfRange, "params depth " + std::to_string(depth()) + " < " +
                                      std::to_string(d));
  }
  ControlParams out;
  out.alpha.assign(alpha.begin(), alpha.begin() + d + 1);
  out.beta.assign(beta.begin(), beta.begin() + d);
  out.densityDepth.assign(densityDepth.begin(), densityDepth.begin() + d + 1);
  out.target = target;
  return out;
}

void validateParams(const ControlParams& p) {
  const int d = p.depth();
  if (d < 0) throw Error(Errc::InvalidParams, "alpha must have at least one entry");
  if (static_cast<int>(p.beta.size()) != d) {
    throw Error(Errc::InvalidParams, "beta needs " + std::to_string(d) + " entries, got " +
                                         std::to_string(p.beta.size()));
  }
  if (static_cast<int>(p.densityDepth.size()) != d + 1) {
    throw Error(Errc::InvalidParams, "density needs " + std::to_string(d + 1) +
                                         " entries, got " + std::to_string(p.densityDepth.size()));
  }
  for (int n = 0; n <= d; ++n) {
    if (p.alpha[n] <= 0) {
      throw Error(Errc::InvalidParams, "alpha_" + std::to_string(n) + " must be positive");
    }
    if (p.densityDepth[n] < 0) {
      throw Error(Errc::InvalidParams, "m_" + std::to_string(n) + " must be nonnegative");
    }
    if (n > 0 && p.densityDepth[n] < p.densityDepth[n - 1]) {
      throw Error(Errc::InvalidParams, "m_n must be nondecreasing (m_" + std::to_string(n) +
                                           " < m_" + std::to_string(n - 1) + ")");
    }
  }
  for (int n = 0; n < d; ++n) {
    const Rational quarter = p.alpha[n] / 4;
    const std::string at = " at n=" + std::to_string(n);
    if (!(p.alpha[n + 1] < quarter)) {
      throw Error(Errc::InvalidParams, "need alpha_{n+1} < alpha_n/4" + at + ": " +
                                           formatRational(p.alpha[n + 1]) + " vs " +
                                           formatRational(quarter));
    }
    if (!(quarter < p.beta[n] && p.beta[n] < p.alpha[n] / 2)) {
      throw Error(Errc::InvalidParams,
                  "need alpha_n/4 < beta_n < alpha_n/2" + at + ": beta = " + formatRational(p.beta[n]));
    }
  }
}

ControlParams geometricParams(int depth, const Rational& alpha0, const Rational& decay,
                              const Rational& betaFraction, std::vector<int> density,
                              const Rational& target) {
  if (depth < 0) throw Error(Errc::InvalidParams, "negative depth");
  ControlParams p;
  p.target = target;
  Rational a = alpha0;
  for (int n = 0; n <= depth; ++n) {
    p.alpha.push_back(a);
    if (n < depth) p.beta.push_back(a * betaFraction);
    a *= decay;
  }
  if (density.empty()) density.push_back(0);
  while (static_cast<int>(density.size()) < depth + 1) density.push_back(density.back());
  density.resize(static_cast<std::size_t>(depth + 1));
  p.densityDepth = std::move(density);
  return p;
}

std::vector<std::int64_t> minimalFactors(const ControlParams& params, const Rational& phiRange,
                                         const std::vector<std::int64_t>& sojournLengths,
                                         std::int64_t t0, std::int64_t cap) {
  std::vector<std::int64_t> factors;
  std::int64_t length = t0;
  std::int64_t prev = 0;
  for (int n = 0; n < params.depth(); ++n) {
    const Rational& a = params.alpha[n];
    const Rational spread = std::max(phiRange, a);
    const std::int64_t soj =
        n < static_cast<int>(sojournLengths.size()) ? sojournLengths[static_cast<std::size_t>(n)] : 0;
    const BigInt need = ceilOf(8 * spread / params.alpha[n + 1]) +
                        ceilOf(Rational(2 * soj, length)) + 2;
    BigInt kappa = std::max(need, BigInt(3));
    kappa = std::max(kappa, BigInt(prev + 1));
    if (kappa > cap) {
      throw Error(Errc::Infeasible, "kappa_" + std::to_string(n + 1) + " needs " + kappa.str() +
                                        " > cap " + std::to_string(cap));
    }
    prev = static_cast<std::int64_t>(kappa);
    if (length > std::numeric_limits<std::int64_t>::max() / prev) {
      throw Error(Errc::Infeasible, "T_" + std::to_string(n + 1) + " overflows 64 bits");
    }
    length *= prev;
    factors.push_back(prev);
  }
  return factors;
}

}  // namespace sparsetail
