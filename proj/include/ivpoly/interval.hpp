#pragma once

#include <cstdint>

namespace ivpoly {

// Closed integer interval [lo, hi]; empty when hi < lo.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  std::int64_t size() const { return hi < lo ? 0 : hi - lo + 1; }
  bool contains(std::int64_t v) const { return lo <= v && v <= hi; }
};

}  // namespace ivpoly
