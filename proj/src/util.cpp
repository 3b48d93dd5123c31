#include "welldist/util.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace welldist {

U256 mul_u128(u128 a, u128 b) {
  const u128 mask = (u128(1) << 64) - 1;
  u128 a0 = a & mask, a1 = a >> 64;
  u128 b0 = b & mask, b1 = b >> 64;
  u128 p00 = a0 * b0;
  u128 p01 = a0 * b1;
  u128 p10 = a1 * b0;
  u128 p11 = a1 * b1;
  u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  U256 r;
  r.lo = (p00 & mask) | (mid << 64);
  r.hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return r;
}

int cmp_u256(const U256& a, const U256& b) {
  if (a.hi != b.hi) return a.hi < b.hi ? -1 : 1;
  if (a.lo != b.lo) return a.lo < b.lo ? -1 : 1;
  return 0;
}

int cmp_prod(u128 a, u128 b, u128 c, u128 d) {
  return cmp_u256(mul_u128(a, b), mul_u128(c, d));
}

u128 scale64_round(double s) {
  if (!(s >= 0.0) || !(s <= 1.0)) throw std::invalid_argument("scale64_round: need 0 <= s <= 1");
  if (s == 0.0) return 0;
  if (s == 1.0) return ONE_RAW;
  const u64 bits = std::bit_cast<u64>(s);
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  u64 mant = bits & ((u64(1) << 52) - 1);
  int e;
  if (biased == 0) {  // subnormal: value = mant * 2^-1074, far below the quantum
    e = -1074;
  } else {
    mant |= u64(1) << 52;
    e = biased - 1075;  // value = mant * 2^e
  }
  // target = round(mant * 2^(e+64)) with ties to even
  int sh = e + 64;
  if (sh >= 0) return u128(mant) << sh;
  int drop = -sh;
  if (drop >= 128) return 0;
  u128 m = mant;
  if (drop > 64) {  // mant < 2^53, so anything dropped past 64 bits rounds to 0
    return 0;
  }
  u128 q = m >> drop;
  u128 rem = m & ((u128(1) << drop) - 1);
  u128 half = u128(1) << (drop - 1);
  if (rem > half || (rem == half && (q & 1))) ++q;
  return q;
}

u128 scale_to_raw(double x) {
  if (!(x >= 0.0) || !(x < 0x1p63)) throw std::invalid_argument("scale_to_raw: need 0 <= x < 2^63");
  if (x == 0.0) return 0;
  const u64 bits = std::bit_cast<u64>(x);
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  u64 mant = bits & ((u64(1) << 52) - 1);
  int e;
  if (biased == 0) {
    e = -1074;
  } else {
    mant |= u64(1) << 52;
    e = biased - 1075;
  }
  const int sh = e + 64;
  if (sh >= 0) return u128(mant) << sh;
  const int drop = -sh;
  if (drop > 64) return 0;
  u128 q = u128(mant) >> drop;
  const u128 rem = u128(mant) & ((u128(1) << drop) - 1);
  const u128 half = u128(1) << (drop - 1);
  if (rem > half || (rem == half && (q & 1))) ++q;
  return q;
}

std::vector<u64> limbs_mul(const std::vector<u64>& a, u64 m) {
  std::vector<u64> out(a.size() + 1, 0);
  u128 carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const u128 cur = u128(a[i]) * m + carry;
    out[i] = static_cast<u64>(cur);
    carry = cur >> 64;
  }
  out[a.size()] = static_cast<u64>(carry);
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

int limbs_cmp(const std::vector<u64>& a, const std::vector<u64>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

std::vector<u64> limbs_pow_mul(u128 base, int exp, u64 factor) {
  std::vector<u64> acc{static_cast<u64>(base), static_cast<u64>(base >> 64)};
  while (acc.size() > 1 && acc.back() == 0) acc.pop_back();
  std::vector<u64> out{factor};
  for (int i = 0; i < exp; ++i) {
    std::vector<u64> next{0};
    for (size_t l = 0; l < acc.size(); ++l) {
      auto part = limbs_mul(out, acc[l]);
      part.insert(part.begin(), l, 0);
      // add part into next
      if (next.size() < part.size()) next.resize(part.size(), 0);
      u128 carry = 0;
      for (size_t i2 = 0; i2 < next.size(); ++i2) {
        const u128 cur = u128(next[i2]) + (i2 < part.size() ? part[i2] : 0) + carry;
        next[i2] = static_cast<u64>(cur);
        carry = cur >> 64;
      }
      if (carry) next.push_back(static_cast<u64>(carry));
    }
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    out = std::move(next);
  }
  return out;
}

double u128_to_double(u128 x) {
  if ((x >> 64) == 0) return static_cast<double>(static_cast<u64>(x));
  // split; one rounding on the final add
  return static_cast<double>(static_cast<u64>(x >> 64)) * 0x1p64 +
         static_cast<double>(static_cast<u64>(x));
}

u64 counter_rng(u64 seed, u64 counter) {
  u64 z = seed + counter * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

InvDiv::InvDiv(u64 divisor) : d(divisor) {
  if (d == 0) throw std::invalid_argument("InvDiv: zero divisor");
  // q_hat = floor(x * floor(2^64/d) / 2^64) undershoots floor(x/d) by at most
  // one; div() fixes that up with a single compare.
  if (d > 1) magic = static_cast<u64>((u128(1) << 64) / d);
}

int thread_budget() {
  if (const char* env = std::getenv("WELLDIST_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_chunks(u64 n, u64 chunk, const std::function<void(u64, u64)>& fn) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const u64 nchunks = (n + chunk - 1) / chunk;
  int workers = thread_budget();
  if (workers <= 1 || nchunks <= 1) {
    for (u64 c = 0; c < nchunks; ++c) fn(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  workers = static_cast<int>(std::min<u64>(workers, nchunks));
  std::atomic<u64> next{0};
  auto work = [&] {
    for (;;) {
      u64 c = next.fetch_add(1);
      if (c >= nchunks) break;
      fn(c * chunk, std::min(n, (c + 1) * chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace welldist
