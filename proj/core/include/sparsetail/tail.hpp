#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsetail/rational.hpp"
#include "sparsetail/scale.hpp"

namespace sparsetail {

struct Component {
  std::int64_t start = 0;
  std::int64_t length = 0;
  int level = 0;

  std::int64_t last() const { return start + length - 1; }
  bool operator==(const Component&) const = default;
};

enum class IntervalClass { Good, Bad, MixedBelow };

const char* intervalClassName(IntervalClass c);

class SparseTail {
 public:
  SparseTail() = default;
  /// Takes components as given; use validateTail to check them.
  SparseTail(Scale scale, int depth, std::vector<std::vector<std::int64_t>> startsByLevel);

  const Scale& scale() const { return scale_; }
  int depth() const { return depth_; }
  std::int64_t horizon() const { return scale_.length(depth_); }
  const std::vector<std::int64_t>& starts(int level) const;
  std::size_t componentCount() const;

  /// Unique component containing i; OutOfRange unless 0 <= i < T_D.
  std::optional<Component> componentAt(std::int64_t i) const;

  /// Aligned interval [k·T_n, (k+1)·T_n − 1].
  IntervalClass classify(std::int64_t k, int n) const;
  /// Arbitrary [first, last] against R_{n,∞}.
  IntervalClass classifyRange(std::int64_t first, std::int64_t last, int n) const;

  /// Number of points of R_level in [first, last].
  std::int64_t countIn(int level, std::int64_t first, std::int64_t last) const;

  /// Components of `level` restricted to [0, T_n) as a tail of depth n.
  SparseTail restricted(int n) const;

  bool operator==(const SparseTail& other) const {
    return scale_ == other.scale_ && depth_ == other.depth_ && starts_ == other.starts_;
  }

 private:
  Scale scale_;
  int depth_ = 0;
  std::vector<std::vector<std::int64_t>> starts_;
};

/// The canonical tail: for j = D−1 down to 0, each T_{j+1}-block not already
/// covered gets one level-j component at offset ⌈κ_{j+1}/3⌉·T_j.
SparseTail buildTail(const Scale& scale, int depth);

enum class ViolationKind { Shape, ZeroExclusion, Overlap, CenterPosition, Sparseness };

const char* violationKindName(ViolationKind kind);

struct TailViolation {
  ViolationKind kind;
  int level = 0;            // level of the interval or component concerned
  std::int64_t first = 0;   // coordinates of the offending interval
  std::int64_t last = 0;
  std::string detail;
};

struct TailValidationOptions {
  bool exhaustive = true;
  std::int64_t sampleStride = 1;  // used when !exhaustive: every stride-th aligned interval
};

std::vector<TailViolation> validateTail(const SparseTail& tail, TailValidationOptions options = {});

/// ϱ(m, n) = #(R_m ∩ [0, n]) / n.
Rational densityProfile(const SparseTail& tail, int m, std::int64_t n);

}  // namespace sparsetail
