#pragma once

// Data-parallel inner loops behind the library's hot paths, in two flavors:
// a scalar reference and SIMD variants selected at runtime. All kernels are
// integer fixed-point except the record update, whose float steps (one
// correctly rounded u64->double conversion and one multiply) are reproduced
// bit-exactly by the SIMD code, so every variant must produce identical
// output; tests enforce that.
//
// WELLDIST_SIMD=scalar|avx2 overrides the automatic choice.

#include <vector>

#include "welldist/util.hpp"

namespace welldist::kernels {

struct KernelTable {
  const char* name;

  // min over q in [q0, q0+len) of max_j ||q * alpha[j]|| (raw units)
  u64 (*psi_block_min)(const u64* alpha, int n, u64 q0, u64 len);

  // Running-record update for a block of sequence points against m targets.
  // xi[j][t] is coordinate j of point k0+t, kroot[t] the weight k^{1/n} * 2^-64
  // as a double. For each target i: val = kroot[t] * (double)dist and the
  // record (rec[i], bestk[i]) improves on strict decrease, earliest k wins.
  void (*record_scan)(const u64* const* xi, int n, u64 k0, u64 len, const double* kroot,
                      const u64* const* eta, u64 m, double* rec, u64* bestk);

  // min over points p of max_j (p_j - c_j), restricted to points with
  // p_j > c_j (strict[j]) or p_j >= c_j (otherwise) on every axis.
  // Returns UINT64_MAX when no point qualifies.
  u64 (*min_empty_span)(const u64* const* pts, u64 q, int n, const u64* c, const u8* strict);

  // max over the grid row eta = eta0 + i*step (i < count) of
  // min over t < q of max(||p1[t] - eta||, tail[t]).
  u64 (*covrad_row)(const u64* p1, const u64* tail, u64 q, u64 eta0, u64 step, u64 count);
};

const KernelTable& scalar();
const KernelTable& active();                     // runtime-selected
std::vector<const KernelTable*> available();     // every variant this build+CPU can run

}  // namespace welldist::kernels
