#pragma once

// Shared low-level helpers: 128/256-bit integer comparisons, exact
// double<->fixed-point scaling, a counter-based RNG, division by an
// invariant 64-bit constant, and a deterministic chunked parallel loop.

#include <cstdint>
#include <functional>
#include <vector>

namespace welldist {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u128 ONE_RAW = u128(1) << 64;  // the value 1.0 in raw scale

// ---- 256-bit products -------------------------------------------------------

struct U256 {
  u128 hi = 0, lo = 0;
};

U256 mul_u128(u128 a, u128 b);
int cmp_u256(const U256& a, const U256& b);
// sign of a*b - c*d, all exact
int cmp_prod(u128 a, u128 b, u128 c, u128 d);

// ---- exact scaling ----------------------------------------------------------

// round(s * 2^64) with round-to-nearest-even, computed from the bits of s.
// Requires s finite and 0 <= s <= 1 (s == 1 gives 2^64).
u128 scale64_round(double s);

// round(x * 2^64) for 0 <= x < 2^63 (same rounding rule, wider range)
u128 scale_to_raw(double x);

// ---- little-endian limb arithmetic (for exact power comparisons) ------------

std::vector<u64> limbs_mul(const std::vector<u64>& a, u64 m);
int limbs_cmp(const std::vector<u64>& a, const std::vector<u64>& b);
// value = base^exp * factor as limbs
std::vector<u64> limbs_pow_mul(u128 base, int exp, u64 factor);

// correctly rounded double for x <= 2^64
double u128_to_double(u128 x);

// raw/2^64 as a correctly rounded double ((double)(u64) is correctly rounded,
// and the 2^-64 scale is exact)
inline double raw_to_double(u64 raw) { return static_cast<double>(raw) * 0x1p-64; }

// ---- counter-based RNG ------------------------------------------------------

// Stateless mix of (seed, counter): splitmix64 finalizer over their sum.
// Safe to evaluate from any thread; identical values for identical inputs.
u64 counter_rng(u64 seed, u64 counter);

// ---- division by an invariant constant --------------------------------------

// floor(x / d) via one mulhi and a fixup; exact for every x. d >= 1.
struct InvDiv {
  u64 d = 1;
  u64 magic = 0;
  explicit InvDiv(u64 divisor);
  u64 div(u64 x) const {
    if (d == 1) return x;
    u64 q = static_cast<u64>((u128(x) * magic) >> 64);
    if (x - q * d >= d) ++q;  // magic underestimates by at most one
    return q;
  }
};

// ---- threads ----------------------------------------------------------------

// Worker budget: WELLDIST_THREADS if set, else hardware concurrency.
int thread_budget();

// Runs fn(begin, end) over [0, n) in fixed chunks. Chunk boundaries do not
// depend on the thread count, so callers that write per-chunk slots get
// identical results at any budget.
void parallel_chunks(u64 n, u64 chunk, const std::function<void(u64, u64)>& fn);

}  // namespace welldist
