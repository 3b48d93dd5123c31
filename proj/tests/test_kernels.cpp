#include <doctest.h>

#include <limits>
#include <vector>

#include "welldist/kernels.hpp"

using namespace welldist;
namespace k = welldist::kernels;

// Every SIMD variant must reproduce the scalar reference bit for bit; these
// run the whole table (scalar included) against scalar on randomized inputs.

TEST_CASE("psi_block_min equivalence and correctness") {
  for (const auto* impl : k::available()) {
    for (u64 trial = 0; trial < 40; ++trial) {
      const int n = 1 + static_cast<int>(trial % 4);
      std::vector<u64> alpha(n);
      for (int j = 0; j < n; ++j) alpha[j] = counter_rng(41, trial * 8 + j) | 1;
      const u64 q0 = 1 + counter_rng(42, trial) % 1000;
      const u64 len = 1 + counter_rng(43, trial) % 700;
      const u64 got = impl->psi_block_min(alpha.data(), n, q0, len);
      const u64 ref = k::scalar().psi_block_min(alpha.data(), n, q0, len);
      REQUIRE(got == ref);
      // brute recheck against single-q evaluations
      u64 brute = std::numeric_limits<u64>::max();
      for (u64 q = q0; q < q0 + len; ++q) {
        u64 d = 0;
        for (int j = 0; j < n; ++j) {
          const u64 v = q * alpha[j];
          const u64 dd = std::min(v, u64(0) - v);
          if (dd > d) d = dd;
        }
        brute = std::min(brute, d);
      }
      REQUIRE(ref == brute);
    }
  }
}

TEST_CASE("record_scan equivalence (values, argmins, bit-exact floats)") {
  for (const auto* impl : k::available()) {
    for (u64 trial = 0; trial < 25; ++trial) {
      const int n = 1 + static_cast<int>(trial % 3);
      const u64 m = 1 + counter_rng(51, trial) % 11;  // exercises the vector tail
      const u64 len = 1 + counter_rng(52, trial) % 500;
      const u64 k0 = 1 + counter_rng(53, trial) % 100;

      std::vector<std::vector<u64>> xi(n, std::vector<u64>(len));
      std::vector<std::vector<u64>> eta(n, std::vector<u64>(m));
      std::vector<double> kroot(len);
      for (u64 t = 0; t < len; ++t) {
        kroot[t] = static_cast<double>(k0 + t) * 0x1p-64;
        for (int j = 0; j < n; ++j) xi[j][t] = counter_rng(54, trial * 100000 + t * 8 + j);
      }
      for (u64 i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) eta[j][i] = counter_rng(55, trial * 1000 + i * 8 + j);

      std::vector<const u64*> xip(n), etap(n);
      for (int j = 0; j < n; ++j) xip[j] = xi[j].data(), etap[j] = eta[j].data();

      std::vector<double> rec_a(m, std::numeric_limits<double>::infinity()), rec_b = rec_a;
      std::vector<u64> bk_a(m, 0), bk_b(m, 0);
      impl->record_scan(xip.data(), n, k0, len, kroot.data(), etap.data(), m, rec_a.data(),
                        bk_a.data());
      k::scalar().record_scan(xip.data(), n, k0, len, kroot.data(), etap.data(), m, rec_b.data(),
                              bk_b.data());
      for (u64 i = 0; i < m; ++i) {
        REQUIRE(rec_a[i] == rec_b[i]);  // bitwise: conversions are exactly rounded
        REQUIRE(bk_a[i] == bk_b[i]);
      }
    }
  }
}

TEST_CASE("min_empty_span equivalence with strictness masks") {
  for (const auto* impl : k::available()) {
    for (u64 trial = 0; trial < 40; ++trial) {
      const int n = 1 + static_cast<int>(trial % 3);
      const u64 q = 1 + counter_rng(61, trial) % 200;
      std::vector<std::vector<u64>> pts(n, std::vector<u64>(q));
      for (u64 t = 0; t < q; ++t)
        for (int j = 0; j < n; ++j) pts[j][t] = counter_rng(62, trial * 10000 + t * 8 + j);
      std::vector<u64> c(n);
      std::vector<u8> strict(n);
      for (int j = 0; j < n; ++j) {
        // half the time pin the candidate to an existing coordinate to hit
        // the exact-equality strictness paths
        c[j] = (counter_rng(63, trial * 8 + j) & 1) ? pts[j][counter_rng(64, trial) % q]
                                                    : counter_rng(65, trial * 8 + j);
        strict[j] = static_cast<u8>(counter_rng(66, trial * 8 + j) & 1);
      }
      std::vector<const u64*> pp(n);
      for (int j = 0; j < n; ++j) pp[j] = pts[j].data();
      REQUIRE(impl->min_empty_span(pp.data(), q, n, c.data(), strict.data()) ==
              k::scalar().min_empty_span(pp.data(), q, n, c.data(), strict.data()));
    }
  }
}

TEST_CASE("covrad_row equivalence") {
  for (const auto* impl : k::available()) {
    for (u64 trial = 0; trial < 30; ++trial) {
      const u64 q = 1 + counter_rng(71, trial) % 150;
      const u64 count = 1 + counter_rng(72, trial) % 300;
      std::vector<u64> p1(q), tail(q);
      for (u64 t = 0; t < q; ++t) {
        p1[t] = counter_rng(73, trial * 1000 + t);
        tail[t] = counter_rng(74, trial * 1000 + t) >> 1;  // <= 2^63 like real distances
      }
      const u64 eta0 = counter_rng(75, trial);
      const u64 step = counter_rng(76, trial) % (u64(1) << 40);
      REQUIRE(impl->covrad_row(p1.data(), tail.data(), q, eta0, step, count) ==
              k::scalar().covrad_row(p1.data(), tail.data(), q, eta0, step, count));
    }
  }
}

TEST_CASE("the dispatch table is one of the known variants") {
  const auto& act = k::active();
  bool known = false;
  for (const auto* impl : k::available())
    if (impl == &act) known = true;
  CHECK(known);
}
