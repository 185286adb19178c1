#pragma once

// Common unfoldings: distinct coprime pairs (a, b) with equal S(a, b) fold
// from one band of the same length.

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "geofold/lattice.hpp"

namespace geofold {

using Pair = std::pair<Int, Int>;

struct SValueGroup {
  Int s = 0;
  /// Normalized 0 < a <= b, sorted by a.
  std::vector<Pair> members;

  friend bool operator==(const SValueGroup&, const SValueGroup&) = default;
};

struct CommonOptions {
  /// Also group pairs with gcd(a, b) > 1 (multi-band deltahedra).
  bool include_non_coprime = false;
};

/// All S-value groups with at least two members and s <= s_max, sorted by s.
inline std::vector<SValueGroup> enumerate_common(Int s_max, CommonOptions opts = {}) {
  std::map<Int, std::vector<Pair>> by_s;
  // 4(a^2 + ab + b^2) >= 12 a^2 for a <= b.
  for (Int a = 1; 12 * a * a <= s_max; ++a) {
    for (Int b = a;; ++b) {
      const Int s = 4 * (a * a + a * b + b * b);
      if (s > s_max) break;
      if (!opts.include_non_coprime && std::gcd(a, b) != 1) continue;
      by_s[s].emplace_back(a, b);
    }
  }
  std::vector<SValueGroup> groups;
  for (auto& [s, members] : by_s) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    groups.push_back({s, std::move(members)});
  }
  return groups;
}

}  // namespace geofold
