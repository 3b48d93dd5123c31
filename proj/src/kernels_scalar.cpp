#include <limits>

#include "welldist/kernels.hpp"

// Reference kernels. Everything here is the semantic ground truth the SIMD
// variants are tested against, so keep it simple and obviously correct.

namespace welldist::kernels {
namespace {

inline u64 absdist(u64 x) {
  u64 n = u64(0) - x;
  return x < n ? x : n;
}

u64 psi_block_min_scalar(const u64* alpha, int n, u64 q0, u64 len) {
  u64 best = std::numeric_limits<u64>::max();
  for (u64 t = 0; t < len; ++t) {
    const u64 q = q0 + t;
    u64 d = 0;
    for (int j = 0; j < n; ++j) {
      const u64 dj = absdist(q * alpha[j]);
      if (dj > d) d = dj;
    }
    if (d < best) best = d;
  }
  return best;
}

void record_scan_scalar(const u64* const* xi, int n, u64 k0, u64 len, const double* kroot,
                        const u64* const* eta, u64 m, double* rec, u64* bestk) {
  for (u64 t = 0; t < len; ++t) {
    const double kr = kroot[t];
    for (u64 i = 0; i < m; ++i) {
      u64 d = 0;
      for (int j = 0; j < n; ++j) {
        const u64 dj = absdist(xi[j][t] - eta[j][i]);
        if (dj > d) d = dj;
      }
      const double val = kr * static_cast<double>(d);
      if (val < rec[i]) {
        rec[i] = val;
        bestk[i] = k0 + t;
      }
    }
  }
}

u64 min_empty_span_scalar(const u64* const* pts, u64 q, int n, const u64* c, const u8* strict) {
  u64 best = std::numeric_limits<u64>::max();
  for (u64 t = 0; t < q; ++t) {
    u64 span = 0;
    bool blocking = true;
    for (int j = 0; j < n; ++j) {
      const u64 p = pts[j][t];
      if (strict[j] ? (p <= c[j]) : (p < c[j])) {
        blocking = false;
        break;
      }
      const u64 diff = p - c[j];
      if (diff > span) span = diff;
    }
    if (blocking && span < best) best = span;
  }
  return best;
}

u64 covrad_row_scalar(const u64* p1, const u64* tail, u64 q, u64 eta0, u64 step, u64 count) {
  u64 rowmax = 0;
  for (u64 i = 0; i < count; ++i) {
    const u64 eta = eta0 + i * step;
    u64 nearest = std::numeric_limits<u64>::max();
    for (u64 t = 0; t < q; ++t) {
      u64 d = absdist(p1[t] - eta);
      if (tail[t] > d) d = tail[t];
      if (d < nearest) nearest = d;
    }
    if (nearest > rowmax) rowmax = nearest;
  }
  return rowmax;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", psi_block_min_scalar, record_scan_scalar,
                                 min_empty_span_scalar, covrad_row_scalar};
  return table;
}

}  // namespace welldist::kernels
