#pragma once

// Finite-scale probes of the liminf mechanism: running records of
// k^{1/n} * (toroidal sup distance to a target), certificate-implied bounds
// at witness scales, and hit statistics against construction levels.
//
// Records are reported as curves at checkpoints, never as claimed limits.
// The float record values carry ~1 ulp of rounding, so every acceptance-grade
// inequality here is re-verified in exact integer arithmetic.

#include "welldist/construction.hpp"

namespace welldist {

struct RecordCheckpoint {
  u64 K = 0;
  double record = 0;  // r(K), non-increasing in K
  u64 best_k = 0;     // earliest index attaining r(K)
};

struct RecordSeries {
  u64 eta_id = 0;
  std::vector<u64> eta_raw;
  std::vector<RecordCheckpoint> checkpoints;
  u64 best_k = 0;  // earliest index attaining the final record
  double final_record = 0;
};

// Reproducible targets from the counter RNG: coordinate j of eta i is
// counter_rng(seed, i*n + j).
std::vector<UnitPoint> sample_etas(int n, u64 count, u64 seed);

// One streaming pass k = 1..max(checkpoints) updating every target's record;
// checkpoints must be ascending and, for prefix sources, within the prefix.
std::vector<RecordSeries> record_tracker(const SequenceSource& src,
                                         const std::vector<UnitPoint>& etas,
                                         const std::vector<u64>& checkpoints);

struct BoundedRecordReport {
  u64 q = 0;
  double bound = 0;  // q^{1/n} * rho_upper(q)
  u64 tested = 0;
  u64 violations = 0;      // exact-integer failures (0 unless the certificate lies)
  double worst_margin = 0; // max over eta of record - bound, double view
};

// Checks min_{k<=q} k^{1/n} dist(xi_k, eta) <= q^{1/n} rho(q) for every target,
// exactly: the float argmin is verified in integers and, on a boundary miss,
// an exact rescan hunts for any k satisfying the bound before reporting a
// violation.
BoundedRecordReport bounded_record_check(const WitnessCertificate& witness,
                                         const SequenceSource& src,
                                         const std::vector<UnitPoint>& etas);

// The exact predicate behind bounded_record_check, exposed for callers that
// run one tracker pass over many checkpoints: does some k <= q satisfy
// k * (2 dist)^n <= q * bound2^n? best_k_hint is tried first.
bool record_bound_holds(const SequenceSource& src, const std::vector<u64>& eta_raw,
                        u64 best_k_hint, u64 q, u128 bound2_raw, int n);

struct LevelHitStats {
  std::vector<std::vector<u64>> levels_hit;  // per eta: list of nu values
  std::vector<u64> hit_counts;               // per level
  std::vector<double> hit_fraction;          // per level
  std::vector<double> expected;              // mu(E_nu)
  std::vector<double> binom_sigma;           // sqrt(mu(1-mu)/N)
  u64 center_bound_checked = 0;
  u64 center_bound_violations = 0;  // exact k_l <= q and dist <= w failures
};

// Membership of each target in each level union (exact raw comparisons); for
// every hit, asserts the exact geometric record bound via the hit box's
// center: its index k_l <= q_nu and sup-dist(center, eta) <= w.
LevelHitStats level_hit_statistics(const ConstructionState& state,
                                   const std::vector<UnitPoint>& etas);

}  // namespace welldist
