#pragma once

// The inductive covering construction: mod-3 anchor selection over a covering
// grid, inflated disjoint box families per level, the overlap condition that
// drives the choice of the next scale, exact pairwise measures with the
// quasi-independence bound, and the divergence lower bound on the limsup set.
//
// Geometry predicates (membership, disjointness, overlap counting, interval
// sums) are exact in raw integer coordinates. Measures are dyadic rationals
// reported as correctly rounded doubles; the epsilon-slack inequalities they
// enter have margins ~1e-1 against rounding ~1e-16.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "welldist/dispersion.hpp"

namespace welldist {

// ---- schedules ---------------------------------------------------------------

struct LevelSchedule {
  std::string kind;
  int n = 1;
  std::vector<double> values;  // psi_1.. ; in (0,1), non-increasing, ->0
};

// "harmonic": psi_nu = min(0.9, nu^{-1/n}); sum psi^n diverges like sum 1/nu.
// Kinds without psi -> 0 (e.g. "constant") are rejected.
LevelSchedule psi_schedule(const std::string& kind, int n, int count);

// ---- sources -------------------------------------------------------------------

// Either a generator (alpha) or a materialized prefix; exactly one is set.
struct SequenceSource {
  const AlphaVector* alpha = nullptr;
  const SequencePrefix* prefix = nullptr;

  int dim() const;
  bool bounded() const { return prefix != nullptr; }
  u64 max_q() const;  // prefix length; generators are unbounded
};

// ---- covering grid -------------------------------------------------------------

struct CoverGrid {
  u64 q = 0;
  double C = 0;
  int n = 0;
  u64 per_axis = 0;    // M = smallest integer with (M*C)^n >= q
  u64 h_raw = 0;       // quantized box side C / q^{1/n}
  u64 W = 0;           // M^n covering boxes
  u64 W_interior = 0;  // (M-1)^n of them lie inside the cube
  std::vector<UnitPoint> anchors;           // materialized when W <= cap
  std::vector<UnitPoint> interior_anchors;  // indices <= M-2 on every axis
};

// throws invalid_argument when M < 4 (the mod-3 interior selection would be
// empty or unsafe below that)
CoverGrid cover_cube(u64 q, double C, int n, u64 materialize_cap = u64(1) << 16);

// ---- mod-3 selection -----------------------------------------------------------

struct Mod3Selection {
  CoverGrid grid;
  std::vector<u64> axis_indices;  // selected per-axis indices: 1, 4, ..., <= M-3
  std::vector<u64> rep_k;         // smallest point index per selected box, slot order
  u64 q_prime = 0;
};

struct WitnessViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Picks one point (the smallest k <= q) in every covering box whose per-axis
// indices are all == 1 (mod 3) and whose psi=1 inflation stays inside the
// cube (indices <= M-3). An empty selected box means (q, C) was not actually
// a witness; that raises WitnessViolationError naming the box.
Mod3Selection select_mod3_representatives(const SequenceSource& src, u64 q, double C);

// ---- levels --------------------------------------------------------------------

struct ConstructionLevel {
  u64 nu = 0;
  u64 q = 0;
  u64 q_prime = 0;
  double psi = 0;
  double C = 0;
  int n = 0;
  u64 w_raw = 0;  // half-width; every box is [center - w, center + w) per axis
  u64 h_raw = 0;
  u64 cover_per_axis = 0;
  bool lazy_centers = false;  // n==1 generator: center = rep_k * alpha_raw0
  u64 alpha_raw0 = 0;
  std::vector<u64> rep_k;                 // ascending axis-0 center
  std::vector<std::vector<u64>> centers;  // [axis][box] when !lazy_centers
  double measure = 0;  // q_prime * (2w)^n, exact by shared side
  double c_coeff = 0;  // q_prime * (2C)^n / q; measure ~= c_coeff * psi^n

  u64 center0(u64 box) const { return lazy_centers ? rep_k[box] * alpha_raw0 : centers[0][box]; }
  u64 center(int axis, u64 box) const {
    return lazy_centers ? rep_k[box] * alpha_raw0 : centers[axis][box];
  }
  AnchoredBox box(u64 index) const;
  // true iff eta lies in some level box; fills the box index
  bool hit(const std::vector<u64>& eta_raw, u64* box_index = nullptr) const;
};

struct InternalGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds the level boxes around the mod-3 representatives and verifies exact
// pairwise disjointness and containment. psi must lie in [2^-40, 1).
ConstructionLevel build_level(const SequenceSource& src, u64 q, double C, double psi);

// ---- overlap condition and admission --------------------------------------------

struct OverlapStats {
  bool pass = true;
  double worst_ratio = 0;  // max over prior boxes of count / (mu(I) * q'_new)
  u64 worst_count = 0;
  u64 worst_level = 0;  // nu of the prior level holding the worst box
  u64 boxes_checked = 0;
};

// counts, for every prior box I_l(lambda), the new boxes meeting it, and
// compares against (1+eps) * mu(I_l) * q'_new
OverlapStats check_overlap_condition(const ConstructionLevel& cand,
                                     const std::vector<ConstructionLevel>& priors, double eps);

// exact mu(E_a cap E_b): per-axis raw overlaps, summed in slot order
double pairwise_intersection_measure(const ConstructionLevel& a, const ConstructionLevel& b);

struct LevelCheckReport {
  u64 nu = 0, q = 0, q_prime = 0;
  double psi = 0;
  double measure = 0;
  double c_coeff = 0;
  double overlap_worst_ratio = 0;              // from the (sharp) check at admission
  std::optional<double> min_pairwise_slack;    // min over lambda of (1+eps)*mu*mu - mu(cap)
};

struct ConstructionState {
  int n = 0;
  double C = 0;
  double eps = 0;
  LevelSchedule schedule;
  std::vector<ConstructionLevel> levels;
  std::vector<double> measures;
  std::vector<std::vector<double>> inter;  // inter[v][l] = mu(E_l cap E_v), l < v
  double measure_sum = 0;
  std::vector<double> schmidt_history;  // lower bound at t = 1..levels
  std::vector<LevelCheckReport> checks;
  bool all_checks_passed = true;
  std::string failure_note;  // set when a check failed (kept for reporting)
};

struct QuasiIndependenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionStalledError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pulls certified witnesses in ascending q; empty optional = exhausted
using WitnessSource = std::function<std::optional<WitnessCertificate>()>;

WitnessSource make_witness_source(const SequenceSource& src, std::vector<u64> candidates,
                                  double C_target, const WitnessOptions& opt = {});

// Builds candidate levels from successive witnesses until the overlap
// condition passes; throws ConstructionStalledError when the source runs dry.
ConstructionLevel find_next_q(const ConstructionState& state, const SequenceSource& src,
                              WitnessSource& witnesses, double psi_next,
                              OverlapStats* stats_out = nullptr);

// Exact pairwise measures against every prior level, the quasi-independence
// bound, and the running divergence sum. Throws QuasiIndependenceError when
// (ccc2) fails (reported, per the ledger of checks, as (sharp) not implying it).
void admit_level(ConstructionState& state, ConstructionLevel level, const OverlapStats& stats);

// (sum_{v<=t} mu)^2 / sum_{l,v<=t} mu(E_l cap E_v), diagonal terms mu(E_v)
double schmidt_lower_bound(const ConstructionState& state, size_t t);

// full pipeline: witnesses -> levels -> checks -> bound history
ConstructionState run_construction(const SequenceSource& src, double C_target, double eps,
                                   const LevelSchedule& schedule, int level_count,
                                   std::vector<u64> candidates, const WitnessOptions& wopt = {});

}  // namespace welldist
