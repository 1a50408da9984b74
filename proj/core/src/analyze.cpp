#include "sparsetail/analyze.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "sparsetail/error.hpp"
#include "sparsetail/window_graph.hpp"

namespace sparsetail {

namespace {

std::int64_t powInt(int base, int exp) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

/// Streams window codes of width k over a prefix.
class WindowStream {
 public:
  WindowStream(const Word& prefix, int alphabet, int width, std::int64_t from)
      : x_(prefix), a_(alphabet), k_(width), mod_(static_cast<std::size_t>(powInt(alphabet, width))), i_(from) {
    for (int j = 0; j < k_ - 1; ++j) code_ = code_ * static_cast<std::size_t>(a_) + sym(from + j);
  }
  /// Code of the window starting at the current index; then advances.
  std::size_t next() {
    code_ = (code_ * static_cast<std::size_t>(a_) + sym(i_ + k_ - 1)) % mod_;
    ++i_;
    return code_;
  }

 private:
  std::size_t sym(std::int64_t i) const { return x_[static_cast<std::size_t>(i)] % static_cast<std::size_t>(a_); }
  const Word& x_;
  int a_, k_;
  std::size_t mod_;
  std::size_t code_ = 0;
  std::int64_t i_;
};

std::size_t codeAt(const Word& x, std::int64_t i, int width, int alphabet) {
  std::size_t code = 0;
  for (int j = 0; j < width; ++j) {
    code = code * static_cast<std::size_t>(alphabet) + x[static_cast<std::size_t>(i + j)] % static_cast<std::size_t>(alphabet);
  }
  return code;
}

Word decode(std::size_t code, int width, int alphabet) {
  Word w(static_cast<std::size_t>(width));
  for (int j = width - 1; j >= 0; --j) {
    w[static_cast<std::size_t>(j)] = static_cast<Symbol>(code % static_cast<std::size_t>(alphabet));
    code /= static_cast<std::size_t>(alphabet);
  }
  return w;
}

std::vector<char> legalMask(const Sft& sft, int m) {
  std::vector<char> mask(static_cast<std::size_t>(powInt(sft.alphabetSize(), m)), 0);
  for (const Word& w : legalWords(sft, m)) mask[windowCode(w.data(), m, sft.alphabetSize())] = 1;
  return mask;
}

/// sums[n][j] = scaled sum of φ−t over [j·T_n, (j+1)·T_n).
std::vector<std::vector<std::int64_t>> levelSums(const Word& prefix, int alphabet, int k,
                                                 const std::vector<std::int64_t>& weight, const Scale& scale,
                                                 int depth) {
  std::vector<std::vector<std::int64_t>> sums(static_cast<std::size_t>(depth + 1));
  const std::int64_t t0 = scale.length(0);
  const std::int64_t blocks = scale.length(depth) / t0;
  auto& base = sums[0];
  base.assign(static_cast<std::size_t>(blocks), 0);
  WindowStream stream(prefix, alphabet, k, 0);
  for (std::int64_t b = 0; b < blocks; ++b) {
    std::int64_t s = 0;
    for (std::int64_t i = 0; i < t0; ++i) s += weight[stream.next()];
    base[static_cast<std::size_t>(b)] = s;
  }
  for (int n = 1; n <= depth; ++n) {
    const auto kappa = static_cast<std::size_t>(scale.factor(n));
    const auto& below = sums[static_cast<std::size_t>(n - 1)];
    auto& cur = sums[static_cast<std::size_t>(n)];
    cur.assign(below.size() / kappa, 0);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < kappa; ++r) s += below[j * kappa + r];
      cur[j] = s;
    }
  }
  return sums;
}

/// insideHigher[j]: level-n block j lies in a component of level > n.
std::vector<char> insideHigher(const SparseTail& tail, int n) {
  const Scale& scale = tail.scale();
  std::vector<char> mask(static_cast<std::size_t>(tail.horizon() / scale.length(n)), 0);
  for (int level = n + 1; level < tail.depth(); ++level) {
    const std::int64_t per = scale.length(level) / scale.length(n);
    for (std::int64_t s : tail.starts(level)) {
      const std::int64_t first = s / scale.length(n);
      std::fill(mask.begin() + first, mask.begin() + first + per, 1);
    }
  }
  return mask;
}

void requirePrefix(const Word& prefix, std::int64_t need) {
  if (static_cast<std::int64_t>(prefix.size()) < need) {
    throw Error(Errc::PrefixTooShort, "prefix has " + std::to_string(prefix.size()) + " symbols, need " +
                                          std::to_string(need));
  }
}

struct Context {
  Potential shifted;
  ScaledPotential scaled;
  std::vector<std::vector<std::int64_t>> sums;
};

Context prepare(const Word& prefix, const SparseTail& tail, const ControlParams& params,
                const Potential& potential) {
  if (params.depth() < tail.depth()) {
    throw Error(Errc::InvalidParams, "control parameters stop below the tail depth");
  }
  requirePrefix(prefix, tail.horizon() + potential.depth() - 1);
  Context c{potential.shifted(params.target), ScaledPotential(potential.shifted(params.target)), {}};
  c.sums = levelSums(prefix, potential.alphabetSize(), potential.depth(), c.scaled.weight, tail.scale(), tail.depth());
  return c;
}

void checkControl(const Sft& sft, const Word& prefix, const SparseTail& tail, const ControlParams& params,
                  const Context& ctx, const VerifyOptions& options,
                  ControlReport& report) {
  const Scale& scale = tail.scale();
  const int depth = tail.depth();
  const int a = sft.alphabetSize();
  const std::int64_t q = ctx.scaled.q;
  auto meets = [&](std::int64_t start, std::int64_t len) {
    return !options.range || (start < options.range->second && start + len > options.range->first);
  };
  report.stats.prefixLength = static_cast<std::int64_t>(prefix.size());

  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const bool bad = prefix[i] >= a || (i + 1 < prefix.size() && (prefix[i + 1] >= a || !sft.allowed(prefix[i], prefix[i + 1])));
    if (!bad || !meets(static_cast<std::int64_t>(i), 2)) continue;
    ++report.stats.legalityViolations;
    if (report.legalityViolations.size() < options.maxListed) {
      report.legalityViolations.push_back({static_cast<std::int64_t>(i)});
    }
  }

  for (int n = 0; n <= depth; ++n) {
    const std::int64_t len = scale.length(n);
    const ScaledBound bound(params.alpha[static_cast<std::size_t>(n)] * q);
    const std::vector<char> skip = insideHigher(tail, n);
    const auto& sums = ctx.sums[static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < sums.size(); ++j) {
      const std::int64_t start = static_cast<std::int64_t>(j) * len;
      if (skip[j] || !meets(start, len)) continue;
      ++report.stats.intervalsChecked;
      const std::int64_t s = sums[j];
      if (bound.atMost(s < 0 ? -s : s, len)) continue;
      ++report.stats.averageViolations;
      if (report.averageViolations.size() < options.maxListed) {
        report.averageViolations.push_back({start, n, Rational(BigInt(s), BigInt(q) * len)});
      }
    }
  }

  for (int n = 0; n < depth; ++n) {
    const int m = params.densityDepth[static_cast<std::size_t>(n)];
    if (m == 0) continue;
    const std::int64_t len = scale.length(n);
    const std::vector<char> legal = legalMask(sft, m);
    const auto needed = std::count(legal.begin(), legal.end(), 1);
    std::vector<std::uint32_t> stamp(legal.size(), 0);
    std::uint32_t id = 0;
    for (std::int64_t s : tail.starts(n)) {
      if (!meets(s, len)) continue;
      ++report.stats.componentsChecked;
      ++id;
      std::int64_t seen = 0;
      if (len >= m) {
        WindowStream stream(prefix, a, m, s);
        for (std::int64_t p = s; p + m <= s + len; ++p) {
          const std::size_t code = stream.next();
          if (legal[code] && stamp[code] != id) {
            stamp[code] = id;
            ++seen;
          }
        }
      }
      if (seen == needed) continue;
      ++report.stats.densityViolations;
      if (report.densityViolations.size() < options.maxListed) {
        std::size_t miss = 0;
        while (miss < legal.size() && !(legal[miss] && stamp[miss] != id)) ++miss;
        report.densityViolations.push_back({s, n, decode(miss, m, a)});
      }
    }
  }
  report.stats.finalAverage = Rational(BigInt(ctx.sums[static_cast<std::size_t>(depth)][0]), BigInt(q) * tail.horizon());
}

}  // namespace

ControlReport verifyControl(const Sft& sft, const Word& prefix, const SparseTail& tail,
                            const ControlParams& params, const Potential& potential,
                            const VerifyOptions& options) {
  const Context ctx = prepare(prefix, tail, params, potential);
  ControlReport report;
  checkControl(sft, prefix, tail, params, ctx, options, report);
  return report;
}

ControlReport verifyControl(const Sft& sft, const Word& prefix, const SparseTail& tail,
                            const ControlParams& params, const Potential& potential,
                            const SynthesisLedger& ledger, const VerifyOptions& options) {
  const Context ctx = prepare(prefix, tail, params, potential);
  ControlReport report;
  checkControl(sft, prefix, tail, params, ctx, options, report);

  const Scale& scale = tail.scale();
  const std::int64_t q = ctx.scaled.q;
  auto flag = [&](std::int64_t start, int level, std::string what) {
    ++report.stats.ledgerViolations;
    if (report.ledgerViolations.size() < options.maxListed) {
      report.ledgerViolations.push_back({start, level, std::move(what)});
    }
  };
  auto meets = [&](std::int64_t start, std::int64_t len) {
    return !options.range || (start < options.range->second && start + len > options.range->first);
  };
  if (ledger.horizon != tail.horizon() || ledger.lengths != scale.lengths) {
    flag(0, tail.depth(), "ledger was produced for a different scale");
    return report;
  }
  if (ledger.target != params.target) flag(0, tail.depth(), "ledger target differs from the configured target");
  if (ledger.contextLength != potential.depth() - 1) flag(0, 0, "ledger context length differs from k - 1");

  // Recorded sums are in units of 1/ledger.scale, recomputed ones in units of 1/q.
  auto matches = [&](std::int64_t recorded, std::int64_t actual) {
    return static_cast<__int128>(recorded) * q == static_cast<__int128>(actual) * ledger.scale;
  };
  std::vector<std::array<std::pair<ScaledBound, ScaledBound>, 2>> bands;
  for (int n = 0; n <= tail.depth(); ++n) {
    const Band minus = signBand(params, n, Sign::Minus), plus = signBand(params, n, Sign::Plus);
    bands.push_back({std::pair{ScaledBound(minus.lo * ledger.scale), ScaledBound(minus.hi * ledger.scale)},
                     std::pair{ScaledBound(plus.lo * ledger.scale), ScaledBound(plus.hi * ledger.scale)}});
  }
  auto inBand = [&](std::int64_t recorded, int level, Sign omega) {
    const auto& [lo, hi] = bands[static_cast<std::size_t>(level)][omega == Sign::Plus ? 1 : 0];
    const std::int64_t len = scale.length(level);
    return lo.atLeast(recorded, len) && hi.atMost(recorded, len);
  };
  std::int64_t cursor = 0;
  for (const CellRecord& c : ledger.cells) {
    if (c.level < 0 || c.level > tail.depth()) {
      flag(c.start, c.level, "cell level out of range");
      continue;
    }
    const std::int64_t len = scale.length(c.level);
    if (c.start != cursor) flag(c.start, c.level, "cells do not tile the prefix at " + std::to_string(cursor));
    cursor = c.start + len;
    if (!meets(c.start, len)) continue;
    ++report.stats.recordsChecked;
    if (c.start % len != 0 || c.start + len > tail.horizon()) {
      flag(c.start, c.level, "cell is not an aligned block inside the horizon");
      continue;
    }
    const bool component = c.level < tail.depth() && std::binary_search(tail.starts(c.level).begin(), tail.starts(c.level).end(), c.start);
    if (component != (c.kind == CellKind::Walk)) flag(c.start, c.level, "cell kind disagrees with the tail");
    const std::int64_t actual = ctx.sums[static_cast<std::size_t>(c.level)][static_cast<std::size_t>(c.start / len)];
    if (!matches(c.sum, actual)) {
      flag(c.start, c.level, "recorded sum " + std::to_string(c.sum) + "/" + std::to_string(ledger.scale) +
                                 " differs from recomputed " + std::to_string(actual) + "/" + std::to_string(q));
    }
    if (!inBand(c.sum, c.level, c.omega)) flag(c.start, c.level, std::string("recorded sum outside its ") + signChar(c.omega) + " band");
  }
  if (cursor != tail.horizon()) flag(cursor, 0, "cells stop before the horizon");
  for (const BlockRecord& b : ledger.blocks) {
    if (b.level < 1 || b.level > tail.depth()) {
      flag(b.start, b.level, "block level out of range");
      continue;
    }
    const std::int64_t len = scale.length(b.level);
    if (!meets(b.start, len)) continue;
    ++report.stats.recordsChecked;
    if (b.start % len != 0 || b.start + len > tail.horizon()) {
      flag(b.start, b.level, "block is not aligned inside the horizon");
      continue;
    }
    const std::int64_t actual = ctx.sums[static_cast<std::size_t>(b.level)][static_cast<std::size_t>(b.start / len)];
    if (!matches(b.sum, actual)) flag(b.start, b.level, "recorded block sum differs from recomputed");
    if (!inBand(b.sum, b.level, b.omega)) flag(b.start, b.level, std::string("recorded block sum outside its ") + signChar(b.omega) + " band");
  }
  return report;
}

Rational EmpiricalMeasure::frequency(const Word& w) const {
  auto it = counts.find(w);
  return it == counts.end() ? Rational(0) : Rational(it->second, length);
}

Rational EmpiricalMeasure::total() const {
  std::int64_t n = 0;
  for (const auto& [w, c] : counts) n += c;
  return Rational(n, length);
}

EmpiricalMeasure empiricalMeasure(const Word& prefix, int alphabetSize, std::int64_t length, int order) {
  if (length < 1 || order < 1) throw Error(Errc::InvalidParams, "measure needs length >= 1 and order >= 1");
  requirePrefix(prefix, order);
  length = std::min<std::int64_t>(length, static_cast<std::int64_t>(prefix.size()) - order + 1);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(powInt(alphabetSize, order)), 0);
  WindowStream stream(prefix, alphabetSize, order, 0);
  for (std::int64_t i = 0; i < length; ++i) ++counts[stream.next()];
  EmpiricalMeasure m;
  m.length = length;
  m.order = order;
  m.alphabetSize = alphabetSize;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c]) m.counts.emplace(decode(c, order, alphabetSize), counts[c]);
  return m;
}

Rational integratePotential(const EmpiricalMeasure& measure, const Potential& potential) {
  if (measure.order < potential.depth()) {
    throw Error(Errc::OrderTooSmall, "measure order " + std::to_string(measure.order) + " < potential depth " +
                                         std::to_string(potential.depth()));
  }
  Rational sum = 0;
  for (const auto& [w, c] : measure.counts) {
    sum += potential.valueAt(windowCode(w.data(), potential.depth(), potential.alphabetSize())) * c;
  }
  return sum / measure.length;
}

Rational coverage(const EmpiricalMeasure& measure, const Sft& sft) {
  const std::vector<char> legal = legalMask(sft, measure.order);
  std::int64_t seen = 0;
  for (const auto& [w, c] : measure.counts)
    if (legal[windowCode(w.data(), measure.order, measure.alphabetSize)]) ++seen;
  return Rational(seen, static_cast<std::int64_t>(std::count(legal.begin(), legal.end(), 1)));
}

ClaimReport verifyDensityClaim(const Sft& sft, const Word& prefix, const SparseTail& tail,
                               const ControlParams& params, int k, std::int64_t t) {
  const int depth = tail.depth();
  if (k < 0 || k + 1 > depth) throw Error(Errc::OutOfRange, "density claim needs k + 1 <= depth");
  const Scale& scale = tail.scale();
  if (t <= scale.length(k + 1)) {
    throw Error(Errc::WindowTooSmall, "t = " + std::to_string(t) + " must exceed T_{k+1} = " +
                                          std::to_string(scale.length(k + 1)));
  }
  const std::int64_t horizon = tail.horizon();
  requirePrefix(prefix, horizon);
  ClaimReport r;
  r.claim = "density";
  r.window = t;
  const int m = params.densityDepth.at(static_cast<std::size_t>(k));

  int mt = -1;
  for (int l = k + 1; l <= depth; ++l) {
    if (scale.length(l) + 2 * scale.length(k + 1) > t) {
      mt = l;
      break;
    }
  }
  std::vector<char> excluded(static_cast<std::size_t>(horizon), 0);
  if (mt >= 0) {
    const std::int64_t shift = scale.length(k + 1);
    for (int l = mt; l < depth; ++l) {
      const std::int64_t len = scale.length(l);
      for (std::int64_t s : tail.starts(l)) {
        std::fill(excluded.begin() + s, excluded.begin() + s + len, 1);
        const std::int64_t a = std::max<std::int64_t>(0, s - shift);
        std::fill(excluded.begin() + a, excluded.begin() + std::max(a, s + len - shift), 1);
      }
    }
  }
  r.detail = "m_t = " + std::to_string(mt) + ", word length " + std::to_string(m);
  const std::int64_t last = horizon - t - std::max(m, 1);  // window [i, i+t] plus m − 1 lookahead inside [0, T_D)
  if (last < 0) return r;
  if (m == 0) {
    for (std::int64_t i = 0; i <= last; ++i) (excluded[static_cast<std::size_t>(i)] ? r.excluded : r.checked)++;
    return r;
  }
  const int a = sft.alphabetSize();
  const std::vector<char> legal = legalMask(sft, m);
  const auto needed = std::count(legal.begin(), legal.end(), 1);
  std::vector<std::int64_t> count(legal.size(), 0);
  std::int64_t distinct = 0;
  auto add = [&](std::int64_t j, int delta) {
    const std::size_t c = codeAt(prefix, j, m, a);
    if (!legal[c]) return;
    if (delta > 0 && count[c]++ == 0) ++distinct;
    if (delta < 0 && --count[c] == 0) --distinct;
  };
  for (std::int64_t j = 0; j <= t; ++j) add(j, +1);
  for (std::int64_t i = 0; i <= last; ++i) {
    if (i > 0) {
      add(i - 1, -1);
      add(i + t, +1);
    }
    if (excluded[static_cast<std::size_t>(i)]) {
      ++r.excluded;
      continue;
    }
    ++r.checked;
    if (distinct != needed) {
      ++r.violations;
      if (r.examples.size() < 100) r.examples.push_back(i);
    }
  }
  return r;
}

Rational averageClaimConstant(const ControlParams& params, const Potential& potential, int k) {
  const Rational& a = params.alpha.at(static_cast<std::size_t>(k));
  const Rational bound = potential.shifted(params.target).maxAbs();
  return a / (2 * (bound + a));
}

std::int64_t averageClaimWindow(const SparseTail& tail, const ControlParams& params, const Potential& potential,
                                int k, int m) {
  const Rational c = averageClaimConstant(params, potential, k);
  return toInt64(ceilOf(Rational(2 * tail.scale().length(m)) / c + 1));
}

ClaimReport verifyAverageClaim(const Sft& sft, const Word& prefix, const SparseTail& tail,
                               const ControlParams& params, const Potential& potential, int k, int m,
                               std::int64_t t) {
  (void)sft;
  const int depth = tail.depth();
  if (k < 0 || k > depth || m < 0 || m > depth) throw Error(Errc::OutOfRange, "average claim levels outside the tail");
  const std::int64_t need = averageClaimWindow(tail, params, potential, k, m);
  if (t < need) {
    throw Error(Errc::WindowTooSmall, "t = " + std::to_string(t) + " is below t_m = " + std::to_string(need));
  }
  const std::int64_t horizon = tail.horizon();
  const int kp = potential.depth();
  requirePrefix(prefix, horizon + kp - 1);
  const ScaledPotential w(potential.shifted(params.target));
  const int a = potential.alphabetSize();
  ClaimReport r;
  r.claim = "average";
  r.window = t;
  r.detail = "C = " + formatRational(averageClaimConstant(params, potential, k)) + ", t_m = " + std::to_string(need);
  if (t > horizon) return r;

  auto inUpper = [&](std::int64_t i) {
    if (i >= horizon) return false;
    auto comp = tail.componentAt(i);
    return comp && comp->level >= m;
  };
  const ScaledBound threshold(2 * params.alpha[static_cast<std::size_t>(k)] * w.q);
  std::int64_t sum = 0;
  for (std::int64_t j = 0; j < t; ++j) sum += w.weight[codeAt(prefix, j, kp, a)];
  for (std::int64_t i = 0; i + t <= horizon; ++i) {
    if (i > 0) sum += w.weight[codeAt(prefix, i + t - 1, kp, a)] - w.weight[codeAt(prefix, i - 1, kp, a)];
    ++r.checked;
    if (threshold.atMost(sum < 0 ? -sum : sum, t)) continue;
    if (inUpper(i) || inUpper(i + t)) {
      ++r.excluded;
      continue;
    }
    ++r.violations;
    if (r.examples.size() < 100) r.examples.push_back(i);
  }
  return r;
}

std::vector<ConsequenceCheck> finiteScaleConsequences(const Sft& sft, const Word& prefix, const SparseTail& tail,
                                                      const ControlParams& params, const Potential& potential) {
  const Context ctx = prepare(prefix, tail, params, potential);
  const int depth = tail.depth();
  const int a = sft.alphabetSize();
  std::vector<ConsequenceCheck> out;
  for (int k = 0; k < depth; ++k) {
    const int m = params.densityDepth[static_cast<std::size_t>(k)] - 1;
    std::vector<char> legal;
    std::int64_t needed = 0;
    if (m >= 1) {
      legal = legalMask(sft, m);
      needed = std::count(legal.begin(), legal.end(), 1);
    }
    for (int n = k + 1; n <= depth; ++n) {
      ConsequenceCheck c;
      c.k = k;
      c.n = n;
      const std::int64_t len = tail.scale().length(n);
      c.average = Rational(BigInt(ctx.sums[static_cast<std::size_t>(n)][0]), BigInt(ctx.scaled.q) * len);
      c.averageOk = absOf(c.average) <= 3 * params.alpha[static_cast<std::size_t>(k)];
      if (m < 1) {
        c.densityOk = true;
      } else {
        std::vector<char> seen(legal.size(), 0);
        std::int64_t distinct = 0;
        WindowStream stream(prefix, a, m, 0);
        for (std::int64_t p = 0; p + m <= len && distinct < needed; ++p) {
          const std::size_t code = stream.next();
          if (legal[code] && !seen[code]) {
            seen[code] = 1;
            ++distinct;
          }
        }
        c.densityOk = distinct == needed;
      }
      out.push_back(c);
    }
  }
  return out;
}

std::vector<CheckpointRow> checkpointSeries(const Sft& sft, const Word& prefix, const SparseTail& tail,
                                            const Potential& potential, int order, int perLevel) {
  if (order < 1) throw Error(Errc::InvalidParams, "coverage order must be at least 1");
  const Scale& scale = tail.scale();
  const std::int64_t horizon = tail.horizon();
  requirePrefix(prefix, horizon + potential.depth() - 1);
  const std::int64_t lastWord = static_cast<std::int64_t>(prefix.size()) - order;
  std::vector<std::int64_t> points;
  for (int n = 0; n <= tail.depth(); ++n) {
    const std::int64_t prev = n == 0 ? 0 : scale.length(n - 1);
    for (int r = 1; n > 0 && r <= perLevel; ++r) points.push_back(prev + (scale.length(n) - prev) * r / (perLevel + 1));
    points.push_back(scale.length(n));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const ScaledPotential w(potential);
  const int a = sft.alphabetSize();
  const std::vector<char> legal = legalMask(sft, order);
  const auto needed = std::count(legal.begin(), legal.end(), 1);
  std::vector<char> seen(legal.size(), 0);
  std::int64_t distinct = 0;
  std::int64_t sum = 0;
  WindowStream phi(prefix, a, potential.depth(), 0);
  WindowStream words(prefix, a, order, 0);
  std::vector<CheckpointRow> out;
  std::int64_t i = 0;
  for (std::int64_t cp : points) {
    for (; i < cp; ++i) {
      sum += w.weight[phi.next()];
      if (i > lastWord) continue;
      const std::size_t code = words.next();
      if (legal[code] && !seen[code]) {
        seen[code] = 1;
        ++distinct;
      }
    }
    out.push_back({cp, Rational(BigInt(sum), BigInt(w.q) * cp), Rational(distinct, static_cast<std::int64_t>(needed))});
  }
  return out;
}

}  // namespace sparsetail
