#include "sparsetail/synth.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "sparsetail/error.hpp"

namespace sparsetail {

Band signBand(const ControlParams& params, int level, Sign omega) {
  const Rational& a = params.alpha.at(static_cast<std::size_t>(level));
  if (omega == Sign::Plus) return {a / 2, a};
  return {Rational(-a), Rational(-a / 2)};
}

Sign chooseSign(const Rational& historyAverage, std::int64_t historyLength, int level,
                const ControlParams& params, Sign steering) {
  if (historyLength < 1) throw Error(Errc::InvalidParams, "chooseSign needs a nonempty history");
  if (level < 0 || level + 1 >= static_cast<int>(params.alpha.size())) {
    throw Error(Errc::OutOfRange, "no alpha_" + std::to_string(level + 1));
  }
  const Rational threshold = params.alpha[static_cast<std::size_t>(level + 1)] * 5 / 6;
  if (steering == Sign::Plus) return historyAverage <= threshold ? Sign::Plus : Sign::Minus;
  return historyAverage >= -threshold ? Sign::Minus : Sign::Plus;
}

ReachTable::ReachTable(const WindowGraph& graph, const std::vector<char>& target) {
  levels_.push_back(target);
  const int a = graph.alphabetSize();
  const std::size_t n = graph.nodes().size();
  const std::size_t cap = n * n + 2;
  for (std::size_t step = 0;; ++step) {
    const auto& prev = levels_.back();
    std::vector<char> next(prev.size(), 0);
    for (std::int64_t u : graph.nodes()) {
      for (int c = 0; c < a; ++c) {
        const std::int64_t v = graph.next(u, static_cast<Symbol>(c));
        if (v >= 0 && prev[static_cast<std::size_t>(v)]) {
          next[static_cast<std::size_t>(u)] = 1;
          break;
        }
      }
    }
    if (next == prev) break;
    if (step > cap) throw Error(Errc::NotMixing, "exact-length reachability does not stabilize");
    levels_.push_back(std::move(next));
  }
  stableAll_ = true;
  for (std::int64_t u : graph.nodes()) stableAll_ = stableAll_ && levels_.back()[static_cast<std::size_t>(u)];
}

namespace {

struct WalkSpec {
  std::int64_t start = -1;  // −1: free start, only for depth-1 potentials
  std::int64_t length = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  const ReachTable* reach = nullptr;
  int densityM = 0;
  std::int64_t budget = -1;  // −1: exhaustive
};

class WalkSearch {
 public:
  WalkSearch(const WindowGraph& g, const ScaledPotential& w, const WalkSpec& spec)
      : g_(g), w_(w), spec_(spec), a_(g.alphabetSize()) {
    minStep_ = std::numeric_limits<std::int64_t>::max();
    maxStep_ = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t u : g.nodes()) {
      for (int c = 0; c < a_; ++c) {
        if (g.next(u, static_cast<Symbol>(c)) < 0) continue;
        const std::int64_t x = w.weight[g.window(u, static_cast<Symbol>(c))];
        minStep_ = std::min(minStep_, x);
        maxStep_ = std::max(maxStep_, x);
      }
    }
    if (spec.densityM > 0) {
      std::int64_t codes = 1;
      for (int i = 0; i < spec.densityM; ++i) codes *= a_;
      seen_.assign(static_cast<std::size_t>(codes), 0);
      needed_ = static_cast<std::int64_t>(legalWords(g.sft(), spec.densityM).size());
      if (g.depth() >= 2 && spec.start >= 0) covered0_ = g.symbols(spec.start);
    }
  }

  std::optional<BlockResult> run() {
    word_.clear();
    return dfs(spec_.start, 0) ? std::optional<BlockResult>(found_) : std::nullopt;
  }
  bool exhausted() const { return exhausted_; }

 private:
  std::int64_t stepNode(std::int64_t node, Symbol c) const { return node < 0 ? c : g_.next(node, c); }
  std::int64_t stepWeight(std::int64_t node, Symbol c) const {
    return node < 0 ? w_.weight[c] : w_.weight[g_.window(node, c)];
  }

  bool denseEnough() {
    const int m = spec_.densityM;
    Word covered = covered0_;
    covered.insert(covered.end(), word_.begin(), word_.end());
    covered.resize(static_cast<std::size_t>(spec_.length));
    if (static_cast<int>(covered.size()) < m) return false;
    std::fill(seen_.begin(), seen_.end(), 0);
    std::int64_t distinct = 0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(m) <= covered.size(); ++i) {
      const std::size_t code = windowCode(covered.data() + i, m, a_);
      if (!seen_[code]) {
        seen_[code] = 1;
        ++distinct;
      }
    }
    return distinct == needed_;
  }

  bool dfs(std::int64_t node, std::int64_t sum) {
    const std::int64_t depth = static_cast<std::int64_t>(word_.size());
    const std::int64_t left = spec_.length - depth;
    if (spec_.budget >= 0 && ++visited_ > spec_.budget) {
      exhausted_ = true;
      return false;
    }
    if (left == 0) {
      if (sum < spec_.lo || sum > spec_.hi) return false;
      if (spec_.reach && !spec_.reach->contains(0, node)) return false;
      if (spec_.densityM > 0 && !denseEnough()) return false;
      found_ = BlockResult{word_, node, sum};
      return true;
    }
    std::vector<Symbol> order;
    for (int c = 0; c < a_; ++c) order.push_back(static_cast<Symbol>(c));
    if (spec_.budget >= 0) {
      // Greedy: prefer the symbol that keeps the running sum on the line to the band middle.
      const __int128 mid = (static_cast<__int128>(spec_.lo) + spec_.hi) / 2;
      const __int128 goal = mid * (depth + 1) / spec_.length;
      auto gap = [&](Symbol c) {
        const std::int64_t v = stepNode(node, c);
        if (v < 0) return std::numeric_limits<__int128>::max();
        const __int128 d = sum + stepWeight(node, c) - goal;
        return d < 0 ? -d : d;
      };
      std::stable_sort(order.begin(), order.end(), [&](Symbol x, Symbol y) { return gap(x) < gap(y); });
    }
    for (Symbol c : order) {
      const std::int64_t v = stepNode(node, c);
      if (v < 0) continue;
      const std::int64_t s = sum + stepWeight(node, c);
      const std::int64_t rest = left - 1;
      if (s + rest * maxStep_ < spec_.lo || s + rest * minStep_ > spec_.hi) continue;
      if (spec_.reach && !spec_.reach->contains(rest, v)) continue;
      word_.push_back(c);
      if (dfs(v, s)) return true;
      word_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  const WindowGraph& g_;
  const ScaledPotential& w_;
  WalkSpec spec_;
  int a_;
  std::int64_t minStep_ = 0, maxStep_ = 0;
  std::vector<char> seen_;
  std::int64_t needed_ = 0;
  Word covered0_;
  Word word_;
  BlockResult found_;
  std::int64_t visited_ = 0;
  bool exhausted_ = false;
};

bool exhaustiveFeasible(int alphabet, std::int64_t length) {
  double words = 1;
  for (std::int64_t i = 0; i < length; ++i) {
    words *= alphabet;
    if (words > double(1 << 20)) return false;
  }
  return true;
}

std::int64_t ceilScaled(const Rational& v) { return toInt64(ceilOf(v)); }
std::int64_t floorScaled(const Rational& v) { return toInt64(floorOf(v)); }

std::string rangeText(std::int64_t lo, std::int64_t hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

BlockGenerator::BlockGenerator(const Sft& sft, const Potential& shifted, const Scale& scale,
                               const ControlParams& params, GeneratorOptions options)
    : sft_(sft),
      scale_(scale),
      params_(params),
      options_(options),
      graph_(sft, shifted.depth()),
      weights_(shifted) {
  for (const auto& [m, w] : options_.universals) {
    if (m >= 1 && sft_.isLegal(w)) universalCache_.emplace(m, w);
  }
  if (params_.depth() < scale_.depth()) {
    throw Error(Errc::InvalidParams, "control parameters stop at depth " + std::to_string(params_.depth()) +
                                         " but the scale has depth " + std::to_string(scale_.depth()));
  }
  minStep_ = std::numeric_limits<std::int64_t>::max();
  maxStep_ = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t u : graph_.nodes()) {
    for (int c = 0; c < graph_.alphabetSize(); ++c) {
      if (graph_.next(u, static_cast<Symbol>(c)) < 0) continue;
      const std::int64_t w = weights_.weight[graph_.window(u, static_cast<Symbol>(c))];
      minStep_ = std::min(minStep_, w);
      maxStep_ = std::max(maxStep_, w);
    }
  }
  goodMask_.assign(static_cast<std::size_t>(graph_.codeCount()), 0);
  if (options_.closeStates) {
    computeGoodStates();
  } else {
    for (std::int64_t u : graph_.nodes()) goodMask_[static_cast<std::size_t>(u)] = 1;
    good_ = graph_.nodes();
    reach_ = ReachTable(graph_, goodMask_);
  }
  buildPolicies();
}

std::pair<std::int64_t, std::int64_t> BlockGenerator::sumBand(int level, Sign omega, std::int64_t length) const {
  const Band b = signBand(params_, level, omega);
  const Rational factor = Rational(weights_.q) * length;
  return {ceilScaled(b.lo * factor), floorScaled(b.hi * factor)};
}

std::int64_t BlockGenerator::stepNode(std::int64_t node, Symbol c) const {
  return node < 0 ? c : graph_.next(node, c);
}

std::int64_t BlockGenerator::stepWeight(std::int64_t node, Symbol c) const {
  return node < 0 ? weights_.weight[c] : weights_.weight[graph_.window(node, c)];
}

std::optional<BlockResult> BlockGenerator::searchBlock(std::int64_t state, std::int64_t length, std::int64_t lo,
                                                       std::int64_t hi, int densityM, const ReachTable& reach,
                                                       std::int64_t budget) const {
  WalkSpec spec;
  spec.start = state;
  spec.length = length;
  spec.lo = lo;
  spec.hi = hi;
  spec.reach = &reach;
  spec.densityM = densityM;
  spec.budget = budget;
  return WalkSearch(graph_, weights_, spec).run();
}

void BlockGenerator::computeGoodStates() {
  const std::int64_t t0 = scale_.length(0);
  const int m0 = params_.densityDepth.at(0);
  const bool exhaustive = exhaustiveFeasible(graph_.alphabetSize(), t0);
  const std::int64_t budget = exhaustive ? -1 : t0 * t0 * graph_.alphabetSize();
  std::vector<char> mask(static_cast<std::size_t>(graph_.codeCount()), 0);
  for (std::int64_t u : graph_.nodes()) mask[static_cast<std::size_t>(u)] = 1;

  std::map<std::tuple<std::int64_t, int, bool>, BlockResult> found;
  for (;;) {
    ReachTable reach(graph_, mask);
    std::vector<char> next(mask.size(), 0);
    found.clear();
    for (std::int64_t s : graph_.nodes()) {
      if (!mask[static_cast<std::size_t>(s)]) continue;
      bool ok = true;
      for (Sign omega : {Sign::Plus, Sign::Minus}) {
        for (bool dense : {false, true}) {
          if (!ok || (dense && m0 == 0)) continue;
          const auto [lo, hi] = sumBand(0, omega, t0);
          auto r = searchBlock(s, t0, lo, hi, dense ? m0 : 0, reach, budget);
          if (r) {
            found.emplace(std::make_tuple(s, static_cast<int>(omega), dense), std::move(*r));
          } else {
            ok = false;
          }
        }
      }
      next[static_cast<std::size_t>(s)] = ok ? 1 : 0;
    }
    if (std::none_of(next.begin(), next.end(), [](char c) { return c != 0; })) {
      throw Error(Errc::BandUnreachable,
                  "no state admits sign blocks of length " + std::to_string(t0) + " for both signs" +
                      (m0 > 0 ? " with all " + std::to_string(m0) + "-words" : std::string()) +
                      " (bands +/-[alpha_0/2, alpha_0])");
    }
    if (next == mask) {
      reach_ = std::move(reach);
      break;
    }
    mask = std::move(next);
  }
  goodMask_ = mask;
  good_.clear();
  for (std::int64_t u : graph_.nodes())
    if (goodMask_[static_cast<std::size_t>(u)]) good_.push_back(u);
  for (auto& [key, result] : found) signCache_.emplace(key, std::make_unique<BlockResult>(std::move(result)));
}

void BlockGenerator::buildPolicies() {
  const int a = graph_.alphabetSize();
  const auto codes = static_cast<std::size_t>(graph_.codeCount());
  std::vector<std::vector<std::int64_t>> reverse(codes);
  for (std::int64_t u : graph_.nodes())
    for (int c = 0; c < a; ++c) {
      const std::int64_t v = graph_.next(u, static_cast<Symbol>(c));
      if (v >= 0) reverse[static_cast<std::size_t>(v)].push_back(u);
    }
  for (int dir = 0; dir < 2; ++dir) {
    const ExtremeCycle cyc = extremeCycle(graph_, weights_.weight, dir == 1);
    std::vector<int>& policy = policy_[dir];
    policy.assign(codes, -1);
    std::vector<std::int64_t> dist(codes, -1);
    std::deque<std::int64_t> queue;
    for (std::size_t i = 0; i < cyc.nodes.size(); ++i) {
      const auto u = static_cast<std::size_t>(cyc.nodes[i]);
      policy[u] = cyc.symbols[i];
      dist[u] = 0;
      queue.push_back(cyc.nodes[i]);
    }
    while (!queue.empty()) {
      const std::int64_t v = queue.front();
      queue.pop_front();
      for (std::int64_t u : reverse[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(u)] >= 0) continue;
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(u);
      }
    }
    for (std::int64_t u : graph_.nodes()) {
      if (dist[static_cast<std::size_t>(u)] <= 0) continue;
      for (int c = 0; c < a; ++c) {
        const std::int64_t v = graph_.next(u, static_cast<Symbol>(c));
        if (v >= 0 && dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] - 1) {
          policy[static_cast<std::size_t>(u)] = c;
          break;
        }
      }
    }
    // A free start (depth-1 potentials only) jumps straight onto the cycle.
    policyStart_[dir] = static_cast<int>(graph_.lastSymbol(cyc.nodes.front()));
  }
}

BlockResult BlockGenerator::steer(std::int64_t state, std::int64_t length, std::int64_t lo, std::int64_t hi) const {
  if (state < 0 && graph_.depth() != 1) throw Error(Errc::InvalidParams, "free start needs a depth-1 potential");
  if (!reach_.stableIsAll()) throw Error(Errc::BandUnreachable, "end set is not reachable from every state");
  const std::int64_t radius = reach_.radius();
  if (length < radius || length <= 0) {
    auto r = searchBlock(state, length, lo, hi, 0, reach_, std::max<std::int64_t>(length, 1) * length * 64);
    if (r) return *r;
    throw Error(Errc::BandUnreachable, "filler of length " + std::to_string(length) + " cannot reach " +
                                           rangeText(lo, hi));
  }
  const std::int64_t maxUp = length - radius;
  auto walk = [&](std::int64_t ups, Word* out) -> std::pair<std::int64_t, std::int64_t> {
    std::int64_t node = state;
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < length; ++i) {
      const std::int64_t left = length - i;
      Symbol c;
      if (left <= radius) {
        int pick = -1;
        for (int s = 0; s < graph_.alphabetSize(); ++s) {
          const std::int64_t v = stepNode(node, static_cast<Symbol>(s));
          if (v >= 0 && reach_.contains(left - 1, v)) {
            pick = s;
            break;
          }
        }
        c = static_cast<Symbol>(pick);
      } else {
        const int dir = i < ups ? 1 : 0;
        c = static_cast<Symbol>(node < 0 ? policyStart_[dir] : policy_[dir][static_cast<std::size_t>(node)]);
      }
      sum += stepWeight(node, c);
      node = stepNode(node, c);
      if (out) out->push_back(c);
    }
    return {sum, node};
  };
  std::int64_t nearest = 0;
  std::int64_t nearestGap = std::numeric_limits<std::int64_t>::max();
  auto probe = [&](std::int64_t ups) {
    const std::int64_t s = walk(ups, nullptr).first;
    const std::int64_t gap = s < lo ? lo - s : (s > hi ? s - hi : 0);
    if (gap < nearestGap) {
      nearestGap = gap;
      nearest = s;
    }
    return s;
  };
  auto finish = [&](std::int64_t ups) {
    BlockResult r;
    r.symbols.reserve(static_cast<std::size_t>(length));
    std::tie(r.sum, r.endState) = walk(ups, &r.symbols);
    return r;
  };
  std::int64_t down = 0, up = maxUp;
  const std::int64_t fDown = probe(down);
  if (fDown >= lo && fDown <= hi) return finish(down);
  const std::int64_t fUp = probe(up);
  if (fUp >= lo && fUp <= hi) return finish(up);
  if (fDown < lo && fUp > hi) {
    while (up - down > 1) {
      const std::int64_t mid = down + (up - down) / 2;
      const std::int64_t f = probe(mid);
      if (f >= lo && f <= hi) return finish(mid);
      if (f < lo) {
        down = mid;
      } else {
        up = mid;
      }
    }
  }
  throw Error(Errc::BandUnreachable, "steering " + std::to_string(length) + " symbols into " + rangeText(lo, hi) +
                                         " failed; nearest sum " + std::to_string(nearest));
}

const Word& BlockGenerator::universal(int m) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = universalCache_.find(m);
  if (it == universalCache_.end()) it = universalCache_.emplace(m, universalWord(sft_, m)).first;
  return it->second;
}

BlockResult BlockGenerator::computeSign(std::int64_t state, Sign omega, bool dense) const {
  const std::int64_t t0 = scale_.length(0);
  const int m = dense ? params_.densityDepth.at(0) : 0;
  const auto [lo, hi] = sumBand(0, omega, t0);
  const bool exhaustive = exhaustiveFeasible(graph_.alphabetSize(), t0);
  auto r = searchBlock(state, t0, lo, hi, m, reach_, exhaustive ? -1 : t0 * t0 * graph_.alphabetSize());
  if (r) return *r;
  if (!exhaustive && m == 0) return steer(state, t0, lo, hi);
  throw Error(Errc::BandUnreachable, std::string("no ") + signChar(omega) + " sign block of length " +
                                         std::to_string(t0) + " from state " + std::to_string(state) +
                                         " with sum in " + rangeText(lo, hi));
}

const BlockResult& BlockGenerator::signBlock(std::int64_t state, Sign omega, bool dense) {
  if (params_.densityDepth.at(0) == 0) dense = false;
  const auto key = std::make_tuple(state, static_cast<int>(omega), dense);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = signCache_.find(key);
    if (it != signCache_.end()) return *it->second;
  }
  auto made = std::make_unique<BlockResult>(computeSign(state, omega, dense));
  std::lock_guard<std::mutex> lock(mutex_);
  return *signCache_.emplace(key, std::move(made)).first->second;
}

BlockResult BlockGenerator::computeSojourn(int level, Sign omega, std::int64_t state) {
  const std::int64_t length = scale_.length(level);
  const int m = params_.densityDepth.at(static_cast<std::size_t>(level));
  const auto [lo, hi] = sumBand(level, omega, length);
  if (m == 0) return steer(state, length, lo, hi);
  const Word& u = universal(m);
  const std::int64_t p = sft_.mixingPower();
  const auto need = static_cast<std::int64_t>(2 * u.size()) + 2 * p + scale_.length(0);
  if (length < need) {
    throw Error(Errc::CoreTooLong, "level " + std::to_string(level) + ": T = " + std::to_string(length) +
                                       " < 2|U| + 2p + T_0 = " + std::to_string(need) + " for m = " +
                                       std::to_string(m));
  }
  BlockResult out;
  out.symbols.reserve(static_cast<std::size_t>(length));
  if (state >= 0) {
    const Word& conn = sft_.connector(graph_.lastSymbol(state), u.front());
    out.symbols.insert(out.symbols.end(), conn.begin(), conn.end());
  }
  out.symbols.insert(out.symbols.end(), u.begin(), u.end());
  std::int64_t node = state;
  for (Symbol c : out.symbols) {
    out.sum += stepWeight(node, c);
    node = stepNode(node, c);
  }
  const std::int64_t filler = length - static_cast<std::int64_t>(out.symbols.size());
  if (filler < graph_.depth() - 1) {
    throw Error(Errc::CoreTooLong, "universal core does not fit inside the level-" + std::to_string(level) +
                                       " component");
  }
  BlockResult tail = steer(node, filler, lo - out.sum, hi - out.sum);
  out.symbols.insert(out.symbols.end(), tail.symbols.begin(), tail.symbols.end());
  out.sum += tail.sum;
  out.endState = tail.endState;
  return out;
}

const BlockResult& BlockGenerator::sojournBlock(int level, Sign omega, std::int64_t state) {
  if (level < 1 || level > scale_.depth()) {
    throw Error(Errc::OutOfRange, "sojourn level " + std::to_string(level) + " outside [1, " +
                                      std::to_string(scale_.depth()) + "]");
  }
  const auto key = std::make_tuple(level, static_cast<int>(omega), state);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sojournCache_.find(key);
    if (it != sojournCache_.end()) return *it->second;
  }
  auto made = std::make_unique<BlockResult>(computeSojourn(level, omega, state));
  std::lock_guard<std::mutex> lock(mutex_);
  return *sojournCache_.emplace(key, std::move(made)).first->second;
}

namespace {

std::int64_t entryState(const WindowGraph& g, const Word& context) {
  if (g.depth() == 1) {
    if (context.empty()) return -1;
    return context.back();
  }
  if (static_cast<int>(context.size()) < g.depth() - 1) {
    throw Error(Errc::PrefixTooShort, "entry context needs " + std::to_string(g.depth() - 1) + " symbols");
  }
  const std::int64_t node = g.nodeOf(context.data(), static_cast<int>(context.size()));
  if (!g.isNode(node)) throw Error(Errc::IllegalWord, "entry context is not a legal word");
  return node;
}

}  // namespace

Word signBlock(const Sft& sft, const Potential& shifted, const ControlParams& params, std::int64_t t0,
               Sign omega, const Word& entryContext, const std::vector<Symbol>& exitClass) {
  const WindowGraph g(sft, shifted.depth());
  const ScaledPotential w(shifted);
  std::vector<char> mask(static_cast<std::size_t>(g.codeCount()), 0);
  for (std::int64_t u : g.nodes()) {
    bool ok = true;
    for (Symbol e : exitClass) ok = ok && sft.allowed(g.lastSymbol(u), e);
    mask[static_cast<std::size_t>(u)] = ok ? 1 : 0;
  }
  const ReachTable reach(g, mask);
  const Band b = signBand(params, 0, omega);
  const Rational factor = Rational(w.q) * t0;
  WalkSpec spec;
  spec.start = entryState(g, entryContext);
  spec.length = t0;
  spec.lo = ceilScaled(b.lo * factor);
  spec.hi = floorScaled(b.hi * factor);
  spec.reach = &reach;
  spec.budget = exhaustiveFeasible(sft.alphabetSize(), t0) ? -1 : t0 * t0 * sft.alphabetSize();
  auto r = WalkSearch(g, w, spec).run();
  if (!r) {
    throw Error(Errc::BandUnreachable, std::string("no ") + signChar(omega) + " sign block of length " +
                                           std::to_string(t0) + " with sum in " + rangeText(spec.lo, spec.hi));
  }
  return r->symbols;
}

Word sojournBlock(const Sft& sft, const Potential& shifted, const ControlParams& params, const Scale& scale,
                  int level, Sign omega, const Word& entryContext) {
  GeneratorOptions options;
  options.closeStates = false;
  BlockGenerator gen(sft, shifted, scale, params, options);
  return gen.sojournBlock(level, omega, entryState(gen.graph(), entryContext)).symbols;
}

namespace {

class Assembler {
 public:
  Assembler(BlockGenerator& gen, const SparseTail& tail, SynthesisLedger& ledger)
      : gen_(gen), tail_(tail), ledger_(ledger), cursor_(static_cast<std::size_t>(tail.depth()), 0) {
    const ControlParams& p = gen.params();
    const std::int64_t q = gen.scaleFactor();
    for (int n = 0; n <= tail.depth(); ++n) {
      const Rational theta = p.alpha[static_cast<std::size_t>(n)] * 5 / 6 * q;
      upper_.emplace_back(theta);
      lower_.emplace_back(Rational(-theta));
    }
  }

  void run(std::int64_t origin) {
    state_ = origin;
    const int d = tail_.depth();
    if (d == 0) {
      leaf(0, Sign::Plus, CellKind::Rest);
    } else {
      composite(d, 0, Sign::Plus);
    }
  }

 private:
  std::int64_t leaf(std::int64_t start, Sign omega, CellKind kind) {
    const BlockResult& r = gen_.signBlock(state_, omega, kind == CellKind::Walk);
    append(r);
    ledger_.cells.push_back({start, 0, kind, omega, r.sum});
    return r.sum;
  }

  std::int64_t sojourn(std::int64_t start, int level, Sign omega) {
    const BlockResult& r = gen_.sojournBlock(level, omega, state_);
    append(r);
    ledger_.cells.push_back({start, level, CellKind::Walk, omega, r.sum});
    return r.sum;
  }

  void append(const BlockResult& r) {
    ledger_.prefix.insert(ledger_.prefix.end(), r.symbols.begin(), r.symbols.end());
    state_ = r.endState;
  }

  bool isComponent(int level, std::int64_t start) {
    const auto& s = tail_.starts(level);
    std::size_t& i = cursor_[static_cast<std::size_t>(level)];
    while (i < s.size() && s[i] < start) ++i;
    return i < s.size() && s[i] == start;
  }

  Sign pick(int n, Sign steering, std::int64_t sum, std::int64_t length) const {
    if (steering == Sign::Plus) return upper_[static_cast<std::size_t>(n)].atMost(sum, length) ? Sign::Plus : Sign::Minus;
    return lower_[static_cast<std::size_t>(n)].atLeast(sum, length) ? Sign::Minus : Sign::Plus;
  }

  std::int64_t composite(int n, std::int64_t start, Sign omega) {
    const Scale& scale = tail_.scale();
    const std::int64_t sub = scale.length(n - 1);
    const std::int64_t kappa = scale.factor(n);
    std::int64_t sum = 0;
    for (std::int64_t j = 0; j < kappa; ++j) {
      const std::int64_t at = start + j * sub;
      const Sign s = j == 0 ? omega : pick(n, omega, sum, j * sub);
      if (isComponent(n - 1, at)) {
        sum += n - 1 == 0 ? leaf(at, s, CellKind::Walk) : sojourn(at, n - 1, s);
      } else {
        sum += n - 1 == 0 ? leaf(at, s, CellKind::Rest) : composite(n - 1, at, s);
      }
    }
    const auto [lo, hi] = gen_.sumBand(n, omega, scale.length(n));
    if (sum < lo || sum > hi) {
      throw Error(Errc::BandUnreachable, "level-" + std::to_string(n) + " block [" + std::to_string(start) + ", " +
                                             std::to_string(start + scale.length(n)) + ") has scaled sum " +
                                             std::to_string(sum) + " outside " + rangeText(lo, hi));
    }
    ledger_.blocks.push_back({start, n, omega, sum});
    return sum;
  }

  BlockGenerator& gen_;
  const SparseTail& tail_;
  SynthesisLedger& ledger_;
  std::vector<std::size_t> cursor_;
  std::vector<ScaledBound> upper_, lower_;
  std::int64_t state_ = -1;
};

}  // namespace

SynthesisLedger synthesize(const Sft& sft, const Potential& potential, const Scale& scale,
                           const SparseTail& tail, const ControlParams& params,
                           const GeneratorOptions& options) {
  validateParams(params);
  const int d = tail.depth();
  if (params.depth() < d) {
    throw Error(Errc::InvalidParams, "control parameters stop at depth " + std::to_string(params.depth()) +
                                         " below tail depth " + std::to_string(d));
  }
  if (scale.depth() < d || !(scale.truncated(d) == tail.scale())) {
    throw Error(Errc::InvalidParams, "tail was built for a different scale");
  }
  const auto [lo, hi] = averageRange(sft, potential);
  if (!(lo < params.target && params.target < hi)) {
    throw Error(Errc::TargetOutOfRange, "target " + formatRational(params.target) + " is not inside (" +
                                            formatRational(lo) + ", " + formatRational(hi) + ")");
  }
  const Potential shifted = potential.shifted(params.target);
  BlockGenerator gen(sft, shifted, tail.scale(), params.truncated(d), options);

  const std::int64_t horizon = tail.horizon();
  const __int128 worst = static_cast<__int128>(gen.weights().maxAbs) * horizon;
  if (worst > (static_cast<__int128>(1) << 62)) {
    throw Error(Errc::Overflow, "scaled sums over " + std::to_string(horizon) + " symbols exceed 64 bits");
  }

  SynthesisLedger ledger;
  ledger.horizon = horizon;
  ledger.contextLength = potential.depth() - 1;
  ledger.alphabetSize = sft.alphabetSize();
  ledger.scale = gen.scaleFactor();
  ledger.target = params.target;
  ledger.lengths = tail.scale().lengths;
  ledger.prefix.reserve(static_cast<std::size_t>(horizon + ledger.contextLength));
  if (potential.depth() >= 2) {
    const Word start = gen.graph().symbols(gen.origin());
    ledger.prefix.insert(ledger.prefix.end(), start.begin(), start.end());
  }
  Assembler(gen, tail, ledger).run(gen.origin());
  return ledger;
}

}  // namespace sparsetail
