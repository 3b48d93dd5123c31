#include "welldist/geometry.hpp"

#include <stdexcept>

namespace welldist {

AnchoredBox::AnchoredBox(UnitPoint a, u128 side, bool contained_flag)
    : anchor(std::move(a)), side_raw(side), contained(contained_flag) {
  if (side_raw == 0) throw std::invalid_argument("AnchoredBox: degenerate side = 0");
  if (side_raw > ONE_RAW) throw std::invalid_argument("AnchoredBox: side > 1");
  if (contained) {
    for (const Frac64& c : anchor.coords)
      if (u128(c.raw) + side_raw > ONE_RAW)
        throw std::invalid_argument("AnchoredBox: box protrudes past [0,1)^n");
  }
}

AnchoredBox AnchoredBox::from_side_double(UnitPoint a, double side, bool contained_flag) {
  return AnchoredBox(std::move(a), scale64_round(side), contained_flag);
}

double AnchoredBox::volume() const {
  double v = 1.0;
  const double s = side();
  for (int j = 0; j < dim(); ++j) v *= s;
  return v;
}

bool box_contains(const AnchoredBox& box, const UnitPoint& p) {
  if (box.dim() != p.dim()) throw std::invalid_argument("box_contains: dimension mismatch");
  for (int j = 0; j < box.dim(); ++j) {
    const u128 lo = box.anchor[j].raw;
    const u128 hi = lo + box.side_raw;  // may exceed 2^64 for uncontained boxes
    const u128 x = p[j].raw;
    if (x < lo || x >= hi) return false;
  }
  return true;
}

u128 axis_overlap_raw(u64 anchor_a, u128 side_a, u64 anchor_b, u128 side_b) {
  const u128 lo = anchor_a > anchor_b ? anchor_a : anchor_b;
  const u128 ea = u128(anchor_a) + side_a;
  const u128 eb = u128(anchor_b) + side_b;
  const u128 hi = ea < eb ? ea : eb;
  return hi > lo ? hi - lo : 0;
}

double box_intersection_volume(const AnchoredBox& a, const AnchoredBox& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("box_intersection_volume: dimension mismatch");
  double v = 1.0;
  for (int j = 0; j < a.dim(); ++j) {
    const u128 o = axis_overlap_raw(a.anchor[j].raw, a.side_raw, b.anchor[j].raw, b.side_raw);
    if (o == 0) return 0.0;
    v *= u128_to_double(o) * 0x1p-64;
  }
  return v;
}

}  // namespace welldist
