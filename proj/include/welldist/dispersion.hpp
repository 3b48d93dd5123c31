#pragma once

// Anchored-box dispersion (largest empty anchored cube), toroidal covering
// radius, and witness certification of the well-distribution condition.
//
// The exact dispersion routes:
//  * n == 1: sorted-gap closed form, O(q log q);
//  * any n: candidate-anchor enumeration with per-axis strictness marks
//    ("just above a coordinate" anchors), O(q^{n+1}) worst case.
// The sup over half-open empty boxes is attained in the limit at anchors that
// are 0 or sit infinitesimally above a point coordinate; carrying an
// open/closed mark per axis makes that limit exact with no epsilons.
//
// grid_oracle_dispersion is the deliberately separate validation route: an
// exhaustive anchor grid with sound pruning, kept independent of the
// enumeration path so the two can check each other.

#include <optional>
#include <vector>

#include "welldist/sequence.hpp"
#include "welldist/three_gap.hpp"

namespace welldist {

struct CandidateAnchor {
  std::vector<u64> coords;
  std::vector<u8> open;  // anchor approaches coords[j] from above
};

struct DispersionResult {
  u64 q = 0;
  int n = 0;
  u128 s_star_raw = 0;
  double s_star = 0;
  double C_of_q = 0;  // q^{1/n} * s_star
  CandidateAnchor witness_anchor;
};

// dispatches to the 1-d closed form or the enumeration
DispersionResult anchored_dispersion(const SequencePrefix& P);

// generic enumeration for any n (the exact algorithm; used directly by tests
// and by anchored_dispersion for n >= 2). If abort_above_raw is set, returns
// nullopt as soon as the dispersion provably exceeds it.
std::optional<DispersionResult> anchored_dispersion_enum(const SequencePrefix& P,
                                                         std::optional<u128> abort_above_raw = {});

// 1-d closed form: max(smallest point, 1 - largest point, largest gap)
DispersionResult dispersion_1d(const SequencePrefix& P);

// Exhaustive-grid lower bound on s_star; requires 0 < resolution <= 0.1.
// Guarantees grid <= s_star <= grid + resolution (+1 grid-rounding ulp).
double grid_oracle_dispersion(const SequencePrefix& P, double resolution);
u128 grid_oracle_dispersion_raw(const SequencePrefix& P, double resolution);

struct CoveringRadius {
  double lower = 0, upper = 0;
  bool exact = false;   // n == 1: lower == upper == rho exactly
  u128 doubled_raw = 0; // 2*rho in raw units when exact
};

// rho = max_eta min_{k<=q} max_j ||xi_{j,k} - eta_j||; exact for n = 1,
// a certified [lower, lower + resolution] interval from a grid scan otherwise.
CoveringRadius covering_radius_torus(const SequencePrefix& P, double resolution = 0.01);

struct WitnessCertificate {
  u64 q = 0;
  int n = 0;
  double C = 0;  // the certified constant (C_target)
  u128 s_star_raw = 0;
  double s_star = 0;
  double rho_lower = 0, rho_upper = 0;
  bool rho_exact = false;
  u128 rho_doubled_raw = 0;  // when exact
  double delta = 0;          // C/2, the bridge to the criterium form
};

struct WitnessOptions {
  double rho_resolution = 0.01;  // grid step for n >= 2 covering radius
  bool want_rho = true;
  // above this q, 1-d Kronecker sources use the O(log q) gap ladder instead
  // of materialize-and-sort (both routes are equivalence-tested)
  u64 ladder_threshold = u64(1) << 20;
};

// Emits a certificate for each candidate q with q^{1/n} * s_star(q) <= C_target
// (compared exactly in integers). An empty result is meaningful: no witness.
std::vector<WitnessCertificate> witness_search(const AlphaVector& alpha,
                                               const std::vector<u64>& q_candidates,
                                               double C_target, const WitnessOptions& opt = {});
std::vector<WitnessCertificate> witness_search(const SequencePrefix& P,
                                               const std::vector<u64>& q_candidates,
                                               double C_target, const WitnessOptions& opt = {});

// single-q certification used by the lazy witness iterators
std::optional<WitnessCertificate> certify_witness(const AlphaVector& alpha, u64 q, double C_target,
                                                  const WitnessOptions& opt = {});
std::optional<WitnessCertificate> certify_witness(const SequencePrefix& P, u64 q, double C_target,
                                                  const WitnessOptions& opt = {});

// Natural witness scales: continued-fraction denominators for n = 1, record
// denominators from the psi scan otherwise; ascending, capped at qmax.
std::vector<u64> default_witness_candidates(const AlphaVector& alpha, u64 qmax);

// exact check of q * s^n <= C^n in integers (shared by tests)
bool side_within_constant(u128 s_raw, u64 q, int n, double C);

}  // namespace welldist
