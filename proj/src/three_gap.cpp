#include "welldist/three_gap.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace welldist {

std::optional<GapStructure1D> three_gap_structure(u64 alpha_raw, u64 q) {
  if (q == 0) throw std::invalid_argument("three_gap_structure: q must be >= 1");
  if (alpha_raw == 0) return std::nullopt;
  // distinctness: k*alpha != k'*alpha (mod 2^64) for k,k' <= q needs
  // q < 2^(64 - trailing_zeros(alpha))
  const int tz = std::countr_zero(alpha_raw);
  if (tz > 0 && q >= (u64(1) << (64 - tz))) return std::nullopt;

  // One-sided record walk: (ks, s) tracks the smallest residue k*alpha mod 1
  // seen so far, (kl, l) the smallest deficit 1 - k*alpha; the next record on
  // one side always lands at the sum of the two indices, so subtractive jumps
  // capped by the index budget enumerate all records up to q.
  u64 ks = 1, kl = 1;
  u128 s = alpha_raw;
  u128 l = ONE_RAW - alpha_raw;
  while (ks + kl <= q) {
    if (s > l) {
      const u128 t_val = (s - 1) / l;
      const u64 t_budget = (q - ks) / kl;
      const u64 t = static_cast<u64>(std::min<u128>(t_val, t_budget));
      ks += t * kl;
      s -= u128(t) * l;
    } else if (l > s) {
      const u128 t_val = (l - 1) / s;
      const u64 t_budget = (q - kl) / ks;
      const u64 t = static_cast<u64>(std::min<u128>(t_val, t_budget));
      kl += t * ks;
      l -= u128(t) * s;
    } else {
      // equal residues meet at 0 exactly; excluded by the distinctness check
      return std::nullopt;
    }
  }

  GapStructure1D g;
  g.q = q;
  g.a = s;
  g.b = l;
  g.k_right = ks;
  g.k_left = kl;
  // Circular gaps of the orbit including 0 come in counts (q+1-ks) of a,
  // (q+1-kl) of b and (ks+kl-q-1) of a+b; dropping the origin merges its two
  // neighbors into one extra a+b gap.
  g.count_a = q - ks;
  g.count_b = q - kl;
  g.count_ab = ks + kl - q;
  return g;
}

GapSummary1D sorted_gap_structure(const std::vector<u64>& pts) {
  if (pts.empty()) throw std::invalid_argument("sorted_gap_structure: empty point set");
  GapSummary1D out;
  u64 mn = pts[0], mx = pts[0];
  out.k_min = out.k_max = 1;
  for (u64 i = 1; i < pts.size(); ++i) {
    if (pts[i] < mn) {
      mn = pts[i];
      out.k_min = i + 1;
    }
    if (pts[i] > mx) {
      mx = pts[i];
      out.k_max = i + 1;
    }
  }
  out.min_point = mn;
  out.max_point = mx;

  std::vector<u64> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  u128 max_interior = 0;
  for (size_t i = 1; i < sorted.size(); ++i) {
    const u128 gap = u128(sorted[i]) - sorted[i - 1];
    if (gap > max_interior) max_interior = gap;
  }
  const u128 wrap = (ONE_RAW - mx) + mn;
  out.max_circular_gap = std::max(max_interior, wrap);
  out.rho_times2_raw = out.max_circular_gap;
  out.s_star_raw = std::max<u128>({u128(mn), ONE_RAW - mx, max_interior});
  return out;
}

}  // namespace welldist
