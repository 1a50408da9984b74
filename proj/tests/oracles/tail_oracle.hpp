#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

/// Point sets R_j, j < depth, built by the decreasing-j recursion on explicit
/// point sets: each T_{j+1}-block that meets no point of a higher level gets
/// the level-j block [b + T_{j+1}/3, b + T_{j+1}/3 + T_j − 1] (slot ⌈κ/3⌉ when κ
/// is not a multiple of 3).
inline std::map<int, std::set<std::int64_t>> tailPoints(const std::vector<std::int64_t>& lengths, int depth) {
  std::map<int, std::set<std::int64_t>> levels;
  std::set<std::int64_t> higher;
  const std::int64_t horizon = lengths[static_cast<std::size_t>(depth)];
  for (int j = depth - 1; j >= 0; --j) {
    const std::int64_t tj = lengths[static_cast<std::size_t>(j)];
    const std::int64_t block = lengths[static_cast<std::size_t>(j + 1)];
    const std::int64_t kappa = block / tj;
    const std::int64_t offset = (kappa + 2) / 3 * tj;
    std::set<std::int64_t>& r = levels[j];
    for (std::int64_t b = 0; b < horizon; b += block) {
      bool covered = false;
      for (std::int64_t i = b; i < b + block && !covered; ++i) covered = higher.count(i) > 0;
      if (covered) continue;
      for (std::int64_t i = b + offset; i < b + offset + tj; ++i) r.insert(i);
    }
    higher.insert(r.begin(), r.end());
  }
  return levels;
}

}  // namespace oracle
