#include "sparsetail/tail.hpp"

#include <algorithm>

#include "sparsetail/error.hpp"

namespace sparsetail {

const char* intervalClassName(IntervalClass c) {
  switch (c) {
    case IntervalClass::Good: return "good";
    case IntervalClass::Bad: return "bad";
    case IntervalClass::MixedBelow: return "mixed";
  }
  return "?";
}

const char* violationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Shape: return "shape";
    case ViolationKind::ZeroExclusion: return "zero-exclusion";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::CenterPosition: return "center-position";
    case ViolationKind::Sparseness: return "sparseness";
  }
  return "?";
}

SparseTail::SparseTail(Scale scale, int depth, std::vector<std::vector<std::int64_t>> startsByLevel)
    : scale_(std::move(scale)), depth_(depth), starts_(std::move(startsByLevel)) {
  if (depth_ < 0 || depth_ > scale_.depth()) {
    throw Error(Errc::OutOfRange, "tail depth " + std::to_string(depth_) + " outside scale depth " +
                                      std::to_string(scale_.depth()));
  }
  starts_.resize(static_cast<std::size_t>(depth_));
  for (auto& level : starts_) std::sort(level.begin(), level.end());
}

const std::vector<std::int64_t>& SparseTail::starts(int level) const {
  if (level < 0 || level >= depth_) {
    throw Error(Errc::OutOfRange, "level " + std::to_string(level) + " not below depth " +
                                      std::to_string(depth_));
  }
  return starts_[static_cast<std::size_t>(level)];
}

std::size_t SparseTail::componentCount() const {
  std::size_t n = 0;
  for (const auto& level : starts_) n += level.size();
  return n;
}

std::optional<Component> SparseTail::componentAt(std::int64_t i) const {
  if (i < 0 || i >= horizon()) {
    throw Error(Errc::OutOfRange, "index " + std::to_string(i) + " outside [0, " +
                                      std::to_string(horizon()) + ")");
  }
  for (int n = depth_ - 1; n >= 0; --n) {
    const auto& s = starts_[static_cast<std::size_t>(n)];
    auto it = std::upper_bound(s.begin(), s.end(), i);
    if (it == s.begin()) continue;
    --it;
    const std::int64_t len = scale_.length(n);
    if (i < *it + len) return Component{*it, len, n};
  }
  return std::nullopt;
}

IntervalClass SparseTail::classifyRange(std::int64_t first, std::int64_t last, int n) const {
  if (first < 0 || last < first || last >= horizon()) {
    throw Error(Errc::OutOfRange, "interval [" + std::to_string(first) + ", " +
                                      std::to_string(last) + "] outside [0, " +
                                      std::to_string(horizon()) + ")");
  }
  bool meets = false;
  for (int level = std::max(n, 0); level < depth_; ++level) {
    const auto& s = starts_[static_cast<std::size_t>(level)];
    const std::int64_t len = scale_.length(level);
    auto it = std::upper_bound(s.begin(), s.end(), last);
    if (it == s.begin()) continue;
    --it;
    if (*it + len - 1 < first) continue;
    if (*it <= first && last <= *it + len - 1) return IntervalClass::Bad;
    meets = true;
  }
  return meets ? IntervalClass::MixedBelow : IntervalClass::Good;
}

IntervalClass SparseTail::classify(std::int64_t k, int n) const {
  if (n < 0 || n > depth_ || k < 0) {
    throw Error(Errc::OutOfRange, "classify(k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  const std::int64_t len = scale_.length(n);
  return classifyRange(k * len, (k + 1) * len - 1, n);
}

std::int64_t SparseTail::countIn(int level, std::int64_t first, std::int64_t last) const {
  const auto& s = starts(level);
  const std::int64_t len = scale_.length(level);
  std::int64_t count = 0;
  auto it = std::upper_bound(s.begin(), s.end(), first - len);
  for (; it != s.end() && *it <= last; ++it) {
    const std::int64_t a = std::max(*it, first);
    const std::int64_t b = std::min(*it + len - 1, last);
    if (a <= b) count += b - a + 1;
  }
  return count;
}

SparseTail SparseTail::restricted(int n) const {
  if (n < 0 || n > depth_) {
    throw Error(Errc::OutOfRange, "cannot restrict depth " + std::to_string(depth_) + " tail to " +
                                      std::to_string(n));
  }
  const std::int64_t end = scale_.length(n);
  std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(n));
  for (int level = 0; level < n; ++level) {
    for (std::int64_t s : starts_[static_cast<std::size_t>(level)]) {
      if (s + scale_.length(level) <= end) out[static_cast<std::size_t>(level)].push_back(s);
    }
  }
  return SparseTail(scale_.truncated(n), n, std::move(out));
}

SparseTail buildTail(const Scale& scale, int depth) {
  if (depth < 0 || depth > scale.depth()) {
    throw Error(Errc::OutOfRange, "depth " + std::to_string(depth) + " exceeds scale depth " +
                                      std::to_string(scale.depth()));
  }
  std::vector<std::vector<std::int64_t>> starts(static_cast<std::size_t>(depth));
  // covered[b]: the b-th block of the current level lies inside a higher component.
  std::vector<char> covered(1, 0);
  for (int j = depth - 1; j >= 0; --j) {
    const std::int64_t kappa = scale.factor(j + 1);
    const std::int64_t slot = (kappa + 2) / 3;
    std::vector<char> next(covered.size() * static_cast<std::size_t>(kappa), 0);
    for (std::size_t b = 0; b < covered.size(); ++b) {
      const std::size_t base = b * static_cast<std::size_t>(kappa);
      if (covered[b]) {
        std::fill(next.begin() + static_cast<std::ptrdiff_t>(base),
                  next.begin() + static_cast<std::ptrdiff_t>(base + static_cast<std::size_t>(kappa)), 1);
        continue;
      }
      const std::size_t pick = base + static_cast<std::size_t>(slot);
      next[pick] = 1;
      starts[static_cast<std::size_t>(j)].push_back(static_cast<std::int64_t>(pick) * scale.length(j));
    }
    covered = std::move(next);
  }
  return SparseTail(scale.truncated(depth), depth, std::move(starts));
}

std::vector<TailViolation> validateTail(const SparseTail& tail, TailValidationOptions options) {
  std::vector<TailViolation> out;
  const Scale& scale = tail.scale();
  const int depth = tail.depth();
  const std::int64_t horizon = tail.horizon();

  struct Span {
    std::int64_t first, last;
    int level;
  };
  std::vector<Span> all;
  for (int n = 0; n < depth; ++n) {
    const std::int64_t len = scale.length(n);
    for (std::int64_t s : tail.starts(n)) {
      if (s < 0 || s % len != 0 || s + len > horizon) {
        out.push_back({ViolationKind::Shape, n, s, s + len - 1,
                       "component is not an aligned T_" + std::to_string(n) + " block inside [0, " +
                           std::to_string(horizon) + ")"});
      }
      if (s <= 0 && 0 <= s + len - 1) {
        out.push_back({ViolationKind::ZeroExclusion, n, s, s + len - 1, "component contains 0"});
      }
      all.push_back({s, s + len - 1, n});
    }
  }
  std::sort(all.begin(), all.end(), [](const Span& a, const Span& b) {
    return a.first != b.first ? a.first < b.first : a.level < b.level;
  });
  for (std::size_t i = 1; i < all.size(); ++i) {
    const Span& a = all[i - 1];
    const Span& b = all[i];
    if (b.first <= a.last) {
      out.push_back({ViolationKind::Overlap, b.level, b.first, b.last,
                     "overlaps level-" + std::to_string(a.level) + " component at " +
                         std::to_string(a.first)});
    } else if (b.first == a.last + 1) {
      out.push_back({ViolationKind::Shape, b.level, a.first, b.last,
                     "adjacent components merge into a non-aligned component"});
    }
  }

  const std::int64_t stride = options.exhaustive ? 1 : std::max<std::int64_t>(1, options.sampleStride);
  for (int n = 1; n <= depth; ++n) {
    const std::int64_t len = scale.length(n);
    const std::int64_t sub = scale.length(n - 1);
    const std::int64_t third = len / 3;
    const auto& lower = tail.starts(n - 1);
    for (std::int64_t k = 0; k * len < horizon; k += stride) {
      const std::int64_t first = k * len;
      const std::int64_t last = first + len - 1;
      if (n < depth && tail.classify(k, n) == IntervalClass::Bad) continue;
      auto it = std::lower_bound(lower.begin(), lower.end(), first);
      std::int64_t count = 0;
      for (; it != lower.end() && *it <= last; ++it) {
        ++count;
        const std::int64_t s = *it;
        if (s < first + third || s + sub - 1 > last - third) {
          out.push_back({ViolationKind::CenterPosition, n, first, last,
                         "level-" + std::to_string(n - 1) + " component at " + std::to_string(s) +
                             " outside the middle third"});
        }
      }
      // 0 < count·T_{n-1}/T_n < 2/κ_n
      if (count == 0 || count * sub * scale.factor(n) >= 2 * len) {
        out.push_back({ViolationKind::Sparseness, n, first, last,
                       std::to_string(count) + " level-" + std::to_string(n - 1) + " components"});
      }
    }
  }
  return out;
}

Rational densityProfile(const SparseTail& tail, int m, std::int64_t n) {
  if (m < 0 || m >= tail.depth()) {
    throw Error(Errc::OutOfRange, "level " + std::to_string(m) + " not below depth " +
                                      std::to_string(tail.depth()));
  }
  if (n < 1 || n > tail.horizon()) {
    throw Error(Errc::OutOfRange, "n = " + std::to_string(n) + " outside [1, " +
                                      std::to_string(tail.horizon()) + "]");
  }
  const std::int64_t last = std::min(n, tail.horizon() - 1);
  return Rational(tail.countIn(m, 0, last), n);
}

}  // namespace sparsetail
