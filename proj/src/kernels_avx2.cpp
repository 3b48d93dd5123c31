#ifdef WELLDIST_HAVE_AVX2

#include <immintrin.h>

#include <limits>

#include "welldist/kernels.hpp"

// AVX2 variants, four 64-bit lanes wide. The float steps of record_scan use
// an exact uint64->double conversion so results stay bit-identical to the
// scalar reference; everything else is pure integer lane work.

namespace welldist::kernels {

const KernelTable& avx2_table();

namespace {

constexpr int kMaxDim = 8;

inline __m256i xor_sign(__m256i v) {
  return _mm256_xor_si256(v, _mm256_set1_epi64x(std::numeric_limits<long long>::min()));
}
inline __m256i cmpgt_u64(__m256i a, __m256i b) {
  return _mm256_cmpgt_epi64(xor_sign(a), xor_sign(b));
}
inline __m256i min_u64(__m256i a, __m256i b) {
  return _mm256_blendv_epi8(a, b, cmpgt_u64(a, b));
}
inline __m256i max_u64(__m256i a, __m256i b) {
  return _mm256_blendv_epi8(b, a, cmpgt_u64(a, b));
}

// min(x, 2^64 - x): exactly one of x, -x has the top bit clear (both at 2^63),
// so selecting on the sign bit of x is the unsigned min.
inline __m256i absdist64(__m256i x) {
  const __m256i neg = _mm256_sub_epi64(_mm256_setzero_si256(), x);
  return _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(x), _mm256_castsi256_pd(neg),
                                              _mm256_castsi256_pd(x)));
}

// Correctly rounded (double)x for the full u64 range: assemble hi/lo halves as
// exact doubles and let the single final add do the rounding, which matches
// the scalar conversion bit for bit.
inline __m256d u64_to_pd(__m256i x) {
  __m256i xh = _mm256_srli_epi64(x, 32);
  xh = _mm256_or_si256(xh, _mm256_castpd_si256(_mm256_set1_pd(19342813113834066795298816.)));  // 2^84
  const __m256i xl =
      _mm256_blend_epi16(x, _mm256_castpd_si256(_mm256_set1_pd(0x0010000000000000)), 0xcc);  // 2^52
  const __m256d f =
      _mm256_sub_pd(_mm256_castsi256_pd(xh), _mm256_set1_pd(19342813118337666422669312.));  // 2^84+2^52
  return _mm256_add_pd(f, _mm256_castsi256_pd(xl));
}

inline u64 hmin_u64(__m256i v) {
  alignas(32) u64 lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  u64 m = lanes[0];
  for (int i = 1; i < 4; ++i)
    if (lanes[i] < m) m = lanes[i];
  return m;
}
inline u64 hmax_u64(__m256i v) {
  alignas(32) u64 lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  u64 m = lanes[0];
  for (int i = 1; i < 4; ++i)
    if (lanes[i] > m) m = lanes[i];
  return m;
}

u64 psi_block_min_avx2(const u64* alpha, int n, u64 q0, u64 len) {
  if (n > kMaxDim || len < 8) return scalar().psi_block_min(alpha, n, q0, len);
  __m256i cur[kMaxDim], step[kMaxDim];
  for (int j = 0; j < n; ++j) {
    const u64 a = alpha[j];
    cur[j] = _mm256_set_epi64x(static_cast<long long>((q0 + 3) * a), static_cast<long long>((q0 + 2) * a),
                               static_cast<long long>((q0 + 1) * a), static_cast<long long>(q0 * a));
    step[j] = _mm256_set1_epi64x(static_cast<long long>(4 * a));
  }
  __m256i acc = _mm256_set1_epi64x(-1);
  const u64 vlen = len & ~u64(3);
  for (u64 t = 0; t < vlen; t += 4) {
    __m256i dmax = _mm256_setzero_si256();
    for (int j = 0; j < n; ++j) {
      dmax = max_u64(dmax, absdist64(cur[j]));
      cur[j] = _mm256_add_epi64(cur[j], step[j]);
    }
    acc = min_u64(acc, dmax);
  }
  u64 best = hmin_u64(acc);
  if (vlen < len) {
    const u64 tail = scalar().psi_block_min(alpha, n, q0 + vlen, len - vlen);
    if (tail < best) best = tail;
  }
  return best;
}

void record_scan_avx2(const u64* const* xi, int n, u64 k0, u64 len, const double* kroot,
                      const u64* const* eta, u64 m, double* rec, u64* bestk) {
  if (n > kMaxDim) {
    scalar().record_scan(xi, n, k0, len, kroot, eta, m, rec, bestk);
    return;
  }
  u64 i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d vrec = _mm256_loadu_pd(rec + i);
    __m256i vbest = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bestk + i));
    __m256i veta[kMaxDim];
    for (int j = 0; j < n; ++j)
      veta[j] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(eta[j] + i));
    for (u64 t = 0; t < len; ++t) {
      __m256i dmax = _mm256_setzero_si256();
      for (int j = 0; j < n; ++j) {
        const __m256i x = _mm256_set1_epi64x(static_cast<long long>(xi[j][t]));
        dmax = max_u64(dmax, absdist64(_mm256_sub_epi64(x, veta[j])));
      }
      const __m256d val = _mm256_mul_pd(_mm256_set1_pd(kroot[t]), u64_to_pd(dmax));
      const __m256d lt = _mm256_cmp_pd(val, vrec, _CMP_LT_OQ);
      vrec = _mm256_blendv_pd(vrec, val, lt);
      vbest = _mm256_blendv_epi8(vbest, _mm256_set1_epi64x(static_cast<long long>(k0 + t)),
                                 _mm256_castpd_si256(lt));
    }
    _mm256_storeu_pd(rec + i, vrec);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(bestk + i), vbest);
  }
  if (i < m) {
    const u64* tail_eta[kMaxDim];
    for (int j = 0; j < n; ++j) tail_eta[j] = eta[j] + i;
    scalar().record_scan(xi, n, k0, len, kroot, tail_eta, m - i, rec + i, bestk + i);
  }
}

u64 min_empty_span_avx2(const u64* const* pts, u64 q, int n, const u64* c, const u8* strict) {
  if (n > kMaxDim || q < 8) return scalar().min_empty_span(pts, q, n, c, strict);
  __m256i vc[kMaxDim];
  for (int j = 0; j < n; ++j) vc[j] = _mm256_set1_epi64x(static_cast<long long>(c[j]));
  const __m256i ones = _mm256_set1_epi64x(-1);
  __m256i acc = ones;
  const u64 vq = q & ~u64(3);
  for (u64 t = 0; t < vq; t += 4) {
    __m256i ok = ones;
    __m256i span = _mm256_setzero_si256();
    for (int j = 0; j < n; ++j) {
      const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pts[j] + t));
      const __m256i gt = cmpgt_u64(p, vc[j]);
      const __m256i okj = strict[j] ? gt : _mm256_or_si256(gt, _mm256_cmpeq_epi64(p, vc[j]));
      ok = _mm256_and_si256(ok, okj);
      span = max_u64(span, _mm256_sub_epi64(p, vc[j]));  // garbage lanes die with ok below
    }
    acc = min_u64(acc, _mm256_or_si256(span, _mm256_andnot_si256(ok, ones)));
  }
  u64 best = hmin_u64(acc);
  if (vq < q) {
    const u64* tail_pts[kMaxDim];
    for (int j = 0; j < n; ++j) tail_pts[j] = pts[j] + vq;
    const u64 tail = scalar().min_empty_span(tail_pts, q - vq, n, c, strict);
    if (tail < best) best = tail;
  }
  return best;
}

u64 covrad_row_avx2(const u64* p1, const u64* tail, u64 q, u64 eta0, u64 step, u64 count) {
  if (count < 8) return scalar().covrad_row(p1, tail, q, eta0, step, count);
  __m256i veta = _mm256_set_epi64x(static_cast<long long>(eta0 + 3 * step),
                                   static_cast<long long>(eta0 + 2 * step),
                                   static_cast<long long>(eta0 + step), static_cast<long long>(eta0));
  const __m256i vstep = _mm256_set1_epi64x(static_cast<long long>(4 * step));
  __m256i rowmax = _mm256_setzero_si256();
  u64 i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256i nearest = _mm256_set1_epi64x(-1);
    for (u64 t = 0; t < q; ++t) {
      __m256i d = absdist64(_mm256_sub_epi64(_mm256_set1_epi64x(static_cast<long long>(p1[t])), veta));
      d = max_u64(d, _mm256_set1_epi64x(static_cast<long long>(tail[t])));
      nearest = min_u64(nearest, d);
    }
    rowmax = max_u64(rowmax, nearest);
    veta = _mm256_add_epi64(veta, vstep);
  }
  u64 best = hmax_u64(rowmax);
  if (i < count) {
    const u64 t = scalar().covrad_row(p1, tail, q, eta0 + i * step, step, count - i);
    if (t > best) best = t;
  }
  return best;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", psi_block_min_avx2, record_scan_avx2,
                                 min_empty_span_avx2, covrad_row_avx2};
  return table;
}

}  // namespace welldist::kernels

#endif  // WELLDIST_HAVE_AVX2
