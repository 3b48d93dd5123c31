#pragma once

// Points and half-open anchored boxes on [0,1)^n. Membership and overlap
// predicates compare raw fixed-point values, so they are exact; volumes are
// exact per-axis raw lengths whose product is reported as a correctly
// rounded double.

#include <vector>

#include "welldist/frac64.hpp"
#include "welldist/util.hpp"

namespace welldist {

struct UnitPoint {
  std::vector<Frac64> coords;

  UnitPoint() = default;
  explicit UnitPoint(std::vector<Frac64> c) : coords(std::move(c)) {}
  int dim() const { return static_cast<int>(coords.size()); }
  Frac64 operator[](int j) const { return coords[j]; }
};

// Axis-aligned cube [anchor, anchor + side)^n. side is stored in raw units
// and may be the full 2^64 (= 1.0). If contained is set, anchor_j + side <= 1
// is enforced on every axis.
struct AnchoredBox {
  UnitPoint anchor;
  u128 side_raw = 0;
  bool contained = true;

  AnchoredBox() = default;
  // throws invalid_argument on side == 0 or, when contained, on protrusion
  AnchoredBox(UnitPoint a, u128 side, bool contained_flag = true);
  static AnchoredBox from_side_double(UnitPoint a, double side, bool contained_flag = true);

  int dim() const { return anchor.dim(); }
  double side() const { return u128_to_double(side_raw) * 0x1p-64; }
  double volume() const;
};

// half-open membership: anchor_j <= p_j < anchor_j + side for every axis
bool box_contains(const AnchoredBox& box, const UnitPoint& p);

// Lebesgue measure of the intersection: product over axes of the exact raw
// overlap lengths, reported as a double.
double box_intersection_volume(const AnchoredBox& a, const AnchoredBox& b);

// exact per-axis raw overlap (0 when disjoint on that axis)
u128 axis_overlap_raw(u64 anchor_a, u128 side_a, u64 anchor_b, u128 side_b);

}  // namespace welldist
