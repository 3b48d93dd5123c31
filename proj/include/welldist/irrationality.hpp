#pragma once

// Irrationality measure function psi(t) = min_{q<=t} max_j ||q*alpha_j||,
// best-approximation records, the Dirichlet bound check, singularity
// diagnostics, and continued-fraction convergents.

#include <string>
#include <vector>

#include "welldist/sequence.hpp"

namespace welldist {

struct BestApproxRecord {
  u64 q = 0;            // record index: psi strictly improves here
  u64 psi_raw = 0;      // exact value of psi(q) in raw units
  double psi_value = 0; // psi_raw / 2^64
  u64 t_end = 0;        // psi(t) == psi_value for t in [q, t_end]
  double normalized = 0;// t_end^{1/n} * psi_value (the within-record maximum)
};

struct IrrationalityProfile {
  AlphaVector alpha;
  u64 T = 0;
  std::vector<BestApproxRecord> records;
  double limsup_estimate = 0;  // max of normalized over records
};

// exact psi in raw units; psi() is the double view
u64 psi_raw(const AlphaVector& alpha, u64 t);
double psi(const AlphaVector& alpha, u64 t);

// scans q = 1..T once (kernel-accelerated), emitting a record per strict
// improvement of the running minimum
IrrationalityProfile best_approx_records(const AlphaVector& alpha, u64 T);

struct DirichletReport {
  bool pass = false;
  double max_normalized = 0;  // max over t <= T of t^{1/n} psi(t)
  u64 argmax_t = 0;
};

// verifies psi(t) <= t^{-1/n} for every integer t <= T using the step
// reconstruction; the comparison is exact (integer) at every record end
DirichletReport dirichlet_check(const IrrationalityProfile& profile);

struct SingularityProfile {
  std::vector<std::pair<u64, double>> local_maxima;  // (t_end, t_end^{1/n} psi)
  std::string classification;  // nonsingular-like | singular-like | rational-degenerate | inconclusive
  double theta = 0.05;
  bool heuristic = true;  // finite-T classification, never a limit claim
};

SingularityProfile singularity_profile(const AlphaVector& alpha, u64 T, double theta = 0.05);

struct Convergent {
  u128 p = 0, q = 1;
};

struct CfExpansion {
  std::vector<Convergent> convergents;  // from 1/a_1 on (the 0/1 seed is dropped)
  bool terminated = false;              // rational input exhausted its expansion
};

// Continued fraction of a decimal literal (or named constant), computed on
// the exact rational given by up to 37 fractional digits. Convergents are
// exact for the literal; they track the underlying irrational while
// q_k stays far below 10^18.
CfExpansion cf_convergents(std::string_view decimal_or_name, int count);

}  // namespace welldist
