#pragma once

// Exact circular-gap structure of {k*alpha : 1 <= k <= q} for one dimension.
//
// Two routes compute the same facts:
//  * sorted_gap_structure: sort the materialized prefix, O(q log q);
//  * three_gap_structure: walk one-sided best-approximation records of the
//    quantized rotation with subtractive jumps, O(log q) and no materialized
//    points, valid whenever the first q orbit points are distinct.
// The gaps of the orbit take at most three lengths a, b, a+b, where a is the
// nearest approach to 0 from the right (attained at k_right) and b from the
// left (at k_left); the counts follow from the two record indices. Tests
// assert both routes agree exhaustively at small q.

#include <optional>
#include <vector>

#include "welldist/util.hpp"

namespace welldist {

struct GapStructure1D {
  u128 a = 0, b = 0;    // raw lengths; a = min point, 2^64 - b = max point
  u64 k_right = 0;      // index attaining the min point
  u64 k_left = 0;       // index attaining the max point
  u64 count_a = 0, count_b = 0, count_ab = 0;  // circular gap multiset
  u64 q = 0;

  u128 min_point() const { return a; }
  u128 max_point() const { return ONE_RAW - b; }
  u128 max_circular_gap() const { return a + b; }  // the gap straddling 0
  // sup side of an empty anchored interval: the end segments are a and b,
  // and interior gaps reach a+b only if a second a+b gap exists
  u128 s_star_raw() const { return count_ab >= 2 ? a + b : (a > b ? a : b); }
  // toroidal covering radius is (a+b)/2 exactly; returned doubled to stay integral
  u128 rho_times2_raw() const { return a + b; }
};

// O(log q) route. Returns nullopt when the orbit is degenerate (alpha's
// denominator divides out: duplicate points or an exact hit on 0).
std::optional<GapStructure1D> three_gap_structure(u64 alpha_raw, u64 q);

// Same facts for an arbitrary 1-d point set, via sorting.
struct GapSummary1D {
  u128 min_point = 0, max_point = 0;
  u64 k_min = 0, k_max = 0;  // 1-based indices attaining min/max (earliest)
  u128 max_circular_gap = 0;
  u128 s_star_raw = 0;       // max(min_point, 1 - max_point, largest interior gap)
  u128 rho_times2_raw = 0;   // largest circular gap
};
GapSummary1D sorted_gap_structure(const std::vector<u64>& pts);

}  // namespace welldist
