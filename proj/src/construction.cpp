#include "welldist/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

namespace welldist {
namespace {

using i128 = __int128;

double root_weight(u64 q, int n) {
  if (n == 1) return static_cast<double>(q);
  if (n == 2) return std::sqrt(static_cast<double>(q));
  return std::pow(static_cast<double>(q), 1.0 / n);
}

double pow_int(double x, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= x;
  return v;
}

u64 selected_per_axis(u64 M) {
  // indices 1, 4, ..., congruent 1 mod 3 and <= M-3
  return M >= 4 ? (M - 4) / 3 + 1 : 0;
}

}  // namespace

// ---- schedule -------------------------------------------------------------------

LevelSchedule psi_schedule(const std::string& kind, int n, int count) {
  if (count < 1) throw std::invalid_argument("psi_schedule: count must be >= 1");
  if (n < 1) throw std::invalid_argument("psi_schedule: dimension must be >= 1");
  if (kind == "constant")
    throw std::invalid_argument("psi_schedule: constant schedules violate psi_nu -> 0");
  if (kind != "harmonic") throw std::invalid_argument("psi_schedule: unknown kind '" + kind + "'");
  LevelSchedule s;
  s.kind = kind;
  s.n = n;
  s.values.reserve(count);
  for (int nu = 1; nu <= count; ++nu)
    s.values.push_back(std::min(0.9, 1.0 / root_weight(static_cast<u64>(nu), n)));
  return s;
}

// ---- source ---------------------------------------------------------------------

int SequenceSource::dim() const {
  if (alpha) return alpha->dim();
  if (prefix) return prefix->n;
  throw std::invalid_argument("SequenceSource: empty source");
}

u64 SequenceSource::max_q() const {
  if (prefix) return prefix->q;
  return std::numeric_limits<u64>::max();
}

// ---- covering grid ----------------------------------------------------------------

CoverGrid cover_cube(u64 q, double C, int n, u64 materialize_cap) {
  if (q == 0) throw std::invalid_argument("cover_cube: q must be >= 1");
  if (!(C > 0)) throw std::invalid_argument("cover_cube: C must be positive");
  if (n < 1) throw std::invalid_argument("cover_cube: dimension must be >= 1");

  // M = smallest integer with (M*C)^n >= q; start from the float estimate and
  // settle the boundary with long-double products (exact for integer values)
  const auto covers = [&](u64 m) {
    long double v = 1.0L;
    const long double mc = static_cast<long double>(m) * static_cast<long double>(C);
    for (int i = 0; i < n; ++i) v *= mc;
    return v >= static_cast<long double>(q);
  };
  u64 M = static_cast<u64>(std::ceil(std::pow(static_cast<double>(q), 1.0 / n) / C));
  if (M < 1) M = 1;
  while (M > 1 && covers(M - 1)) --M;
  while (!covers(M)) ++M;
  if (M < 4)
    throw std::invalid_argument("cover_cube: per-axis covering count " + std::to_string(M) +
                                " < 4; the mod-3 interior selection needs at least 4");

  CoverGrid g;
  g.q = q;
  g.C = C;
  g.n = n;
  g.per_axis = M;
  g.h_raw = static_cast<u64>(scale_to_raw(C / root_weight(q, n)));
  u128 w = 1, wi = 1;
  for (int i = 0; i < n; ++i) {
    w *= M;
    wi *= (M - 1);
    if (w > (u128(1) << 62)) throw std::invalid_argument("cover_cube: W overflows");
  }
  g.W = static_cast<u64>(w);
  g.W_interior = static_cast<u64>(wi);

  if (g.W <= materialize_cap) {
    std::vector<u64> idx(n, 0);
    for (;;) {
      std::vector<Frac64> coords(n);
      bool interior = true;
      for (int j = 0; j < n; ++j) {
        const u128 a = u128(idx[j]) * g.h_raw;
        if (a >= ONE_RAW) throw InternalGeometryError("cover_cube: anchor wrapped");
        coords[j] = Frac64::from_raw(static_cast<u64>(a));
        if (idx[j] > M - 2) interior = false;
      }
      g.anchors.emplace_back(coords);
      if (interior) g.interior_anchors.emplace_back(std::move(coords));
      int j = n - 1;
      while (j >= 0 && ++idx[j] == M) idx[j--] = 0;
      if (j < 0) break;
    }
  }
  return g;
}

// ---- mod-3 selection ----------------------------------------------------------------

namespace {

// walk the source points k = 1..q, calling fn(k, coords_raw pointer)
template <typename Fn>
void for_each_point(const SequenceSource& src, u64 q, Fn&& fn) {
  const int n = src.dim();
  if (src.prefix) {
    if (q > src.prefix->q) throw std::invalid_argument("sequence source shorter than q");
    std::vector<u64> buf(n);
    for (u64 k = 1; k <= q; ++k) {
      for (int j = 0; j < n; ++j) buf[j] = src.prefix->axes[j][k - 1];
      fn(k, buf.data());
    }
  } else {
    std::vector<u64> cur(n, 0);
    std::vector<u64> a(n);
    for (int j = 0; j < n; ++j) a[j] = src.alpha->components[j].raw;
    for (u64 k = 1; k <= q; ++k) {
      for (int j = 0; j < n; ++j) cur[j] += a[j];
      fn(k, cur.data());
    }
  }
}

}  // namespace

Mod3Selection select_mod3_representatives(const SequenceSource& src, u64 q, double C) {
  const int n = src.dim();
  Mod3Selection sel;
  sel.grid = cover_cube(q, C, n, /*materialize_cap=*/0);
  const u64 M = sel.grid.per_axis;
  const u64 S = selected_per_axis(M);
  sel.axis_indices.reserve(S);
  for (u64 s = 0; s < S; ++s) sel.axis_indices.push_back(1 + 3 * s);

  u128 total = 1;
  for (int j = 0; j < n; ++j) {
    total *= S;
    if (total > (u128(1) << 31))
      throw std::invalid_argument("select_mod3_representatives: selected box count too large");
  }
  sel.q_prime = static_cast<u64>(total);
  sel.rep_k.assign(sel.q_prime, 0);  // 0 = empty slot

  const InvDiv div_h(sel.grid.h_raw);
  const u64 imax = M - 3;
  for_each_point(src, q, [&](u64 k, const u64* coords) {
    u64 slot = 0;
    for (int j = 0; j < n; ++j) {
      const u64 i = div_h.div(coords[j]);
      if (i < 1 || i > imax || (i - 1) % 3 != 0) return;
      slot = slot * S + (i - 1) / 3;
    }
    if (sel.rep_k[slot] == 0) sel.rep_k[slot] = k;  // ascending k: first hit is smallest
  });

  for (u64 slot = 0; slot < sel.q_prime; ++slot) {
    if (sel.rep_k[slot] == 0) {
      std::ostringstream os;
      os << "select_mod3_representatives: covering box at indices (";
      u64 rem = slot;
      std::vector<u64> digits(n);
      for (int j = n - 1; j >= 0; --j) {
        digits[j] = 1 + 3 * (rem % S);
        rem /= S;
      }
      for (int j = 0; j < n; ++j) os << (j ? "," : "") << digits[j];
      os << ") holds no point with k <= " << q << "; (q, C) is not a witness";
      throw WitnessViolationError(os.str());
    }
  }
  return sel;
}

// ---- level construction ---------------------------------------------------------------

AnchoredBox ConstructionLevel::box(u64 index) const {
  std::vector<Frac64> anchor(n);
  for (int j = 0; j < n; ++j) anchor[j] = Frac64::from_raw(center(j, index) - w_raw);
  return AnchoredBox(UnitPoint(std::move(anchor)), u128(2) * w_raw, true);
}

bool ConstructionLevel::hit(const std::vector<u64>& eta_raw, u64* box_index) const {
  // boxes are disjoint with centers >= 2w apart on axis 0, so at most one
  // candidate per eta: the first center with center + w > eta
  const i128 target = static_cast<i128>(eta_raw[0]) - static_cast<i128>(w_raw);
  u64 lo = 0, hi = q_prime;
  while (lo < hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (static_cast<i128>(center0(mid)) > target)
      hi = mid;
    else
      lo = mid + 1;
  }
  for (u64 b = lo; b < q_prime; ++b) {
    const i128 d0 = static_cast<i128>(center0(b)) - static_cast<i128>(eta_raw[0]);
    if (d0 > static_cast<i128>(w_raw)) break;  // center - w > eta: past every candidate
    bool inside = true;
    for (int j = 0; j < n; ++j) {
      const i128 d = static_cast<i128>(eta_raw[j]) - static_cast<i128>(center(j, b));
      if (d < -static_cast<i128>(w_raw) || d >= static_cast<i128>(w_raw)) {
        inside = false;
        break;
      }
    }
    if (inside) {
      if (box_index) *box_index = b;
      return true;
    }
  }
  return false;
}

ConstructionLevel build_level(const SequenceSource& src, u64 q, double C, double psi) {
  if (!(psi < 1.0) || !(psi >= 0x1p-40))
    throw std::invalid_argument("build_level: psi must lie in [2^-40, 1)");
  const int n = src.dim();
  auto sel = select_mod3_representatives(src, q, C);

  ConstructionLevel lv;
  lv.q = q;
  lv.q_prime = sel.q_prime;
  lv.psi = psi;
  lv.C = C;
  lv.n = n;
  lv.h_raw = sel.grid.h_raw;
  lv.cover_per_axis = sel.grid.per_axis;
  const double w_real = C * psi / root_weight(q, n);
  lv.w_raw = static_cast<u64>(scale_to_raw(w_real));
  if (lv.w_raw == 0) throw std::invalid_argument("build_level: degenerate box half-width");
  lv.rep_k = std::move(sel.rep_k);

  if (src.alpha && n == 1) {
    lv.lazy_centers = true;
    lv.alpha_raw0 = src.alpha->components[0].raw;
  } else {
    lv.centers.assign(n, std::vector<u64>(lv.q_prime));
    if (src.prefix) {
      for (u64 b = 0; b < lv.q_prime; ++b)
        for (int j = 0; j < n; ++j) lv.centers[j][b] = src.prefix->axes[j][lv.rep_k[b] - 1];
    } else {
      for (u64 b = 0; b < lv.q_prime; ++b)
        for (int j = 0; j < n; ++j) lv.centers[j][b] = src.alpha->components[j].raw * lv.rep_k[b];
    }
    if (n >= 2) {
      // order by axis-0 center for the window searches
      std::vector<u64> perm(lv.q_prime);
      std::iota(perm.begin(), perm.end(), 0);
      std::sort(perm.begin(), perm.end(),
                [&](u64 a, u64 b) { return lv.centers[0][a] < lv.centers[0][b]; });
      std::vector<u64> tmp(lv.q_prime);
      for (int j = 0; j < n; ++j) {
        for (u64 b = 0; b < lv.q_prime; ++b) tmp[b] = lv.centers[j][perm[b]];
        lv.centers[j].swap(tmp);
      }
      for (u64 b = 0; b < lv.q_prime; ++b) tmp[b] = lv.rep_k[perm[b]];
      lv.rep_k.swap(tmp);
    }
  }

  // exact containment: every box must stay inside [0,1)^n (guaranteed by the
  // i <= M-3 selection up to quantization, so violations are geometry bugs)
  for (u64 b = 0; b < lv.q_prime; ++b) {
    for (int j = 0; j < n; ++j) {
      const u64 c = lv.center(j, b);
      if (c < lv.w_raw || c > u64(0) - lv.w_raw)
        throw InternalGeometryError("build_level: box protrudes past the cube");
    }
  }

  // exact pairwise disjointness (cc1). Boxes overlap iff every axis-0..n-1
  // center difference is < 2w; with axis-0 sorted a forward window suffices.
  // The window scan relies on ascending axis-0 centers, so verify that first
  // (slot order guarantees it for n = 1, the sort above for n >= 2).
  const u64 two_w = 2 * lv.w_raw;
  for (u64 b = 0; b + 1 < lv.q_prime; ++b)
    if (lv.center0(b + 1) <= lv.center0(b))
      throw InternalGeometryError("build_level: centers not ascending on axis 0");
  for (u64 b = 0; b + 1 < lv.q_prime; ++b) {
    const u64 c0 = lv.center0(b);
    for (u64 r = b + 1; r < lv.q_prime; ++r) {
      const u64 d0 = lv.center0(r) - c0;  // sorted: non-negative
      if (d0 >= two_w) break;
      bool overlap = true;
      for (int j = 1; j < n; ++j) {
        const u64 cj = lv.center(j, b), cr = lv.center(j, r);
        const u64 dj = cj > cr ? cj - cr : cr - cj;
        if (dj >= two_w) {
          overlap = false;
          break;
        }
      }
      if (overlap) throw InternalGeometryError("build_level: boxes intersect within a level");
    }
  }

  const double side = raw_to_double(two_w);
  lv.measure = static_cast<double>(lv.q_prime) * pow_int(side, n);
  lv.c_coeff = static_cast<double>(lv.q_prime) * pow_int(2.0 * C, n) / static_cast<double>(q);
  return lv;
}

// ---- overlap counting and measures ------------------------------------------------------

namespace {

// first box index with center0 > bound (i128 bound, centers ascending)
u64 first_center_above(const ConstructionLevel& lv, i128 bound) {
  u64 lo = 0, hi = lv.q_prime;
  while (lo < hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (static_cast<i128>(lv.center0(mid)) > bound)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

OverlapStats check_overlap_condition(const ConstructionLevel& cand,
                                     const std::vector<ConstructionLevel>& priors, double eps) {
  OverlapStats st;
  const double vol_new_count = static_cast<double>(cand.q_prime);
  for (const auto& prior : priors) {
    const double mu_box = pow_int(raw_to_double(2 * prior.w_raw), prior.n);
    const double budget = (1.0 + eps) * mu_box * vol_new_count;
    const u64 wsum = prior.w_raw + cand.w_raw;
    for (u64 b = 0; b < prior.q_prime; ++b) {
      // new boxes meet I_b iff |center difference| < w_prior + w_new on every axis
      const i128 c0 = prior.center0(b);
      u64 idx = first_center_above(cand, c0 - static_cast<i128>(wsum));
      u64 count = 0;
      for (; idx < cand.q_prime; ++idx) {
        const i128 d0 = static_cast<i128>(cand.center0(idx)) - c0;
        if (d0 >= static_cast<i128>(wsum)) break;
        bool meets = true;
        for (int j = 1; j < cand.n; ++j) {
          const u64 cj = prior.center(j, b), nj = cand.center(j, idx);
          const u64 dj = cj > nj ? cj - nj : nj - cj;
          if (dj >= wsum) {
            meets = false;
            break;
          }
        }
        if (meets) ++count;
      }
      ++st.boxes_checked;
      const double ratio = static_cast<double>(count) / (mu_box * vol_new_count);
      if (ratio > st.worst_ratio) {
        st.worst_ratio = ratio;
        st.worst_count = count;
        st.worst_level = prior.nu;
      }
      if (static_cast<double>(count) > budget) st.pass = false;
    }
  }
  return st;
}

double pairwise_intersection_measure(const ConstructionLevel& a, const ConstructionLevel& b) {
  const ConstructionLevel& outer = a.q_prime <= b.q_prime ? a : b;
  const ConstructionLevel& inner = a.q_prime <= b.q_prime ? b : a;
  const u64 wsum = outer.w_raw + inner.w_raw;
  u128 raw_sum_1d = 0;   // exact for n == 1
  double vol_sum = 0.0;  // per-pair products for n >= 2
  for (u64 ob = 0; ob < outer.q_prime; ++ob) {
    const i128 c0 = outer.center0(ob);
    u64 idx = first_center_above(inner, c0 - static_cast<i128>(wsum));
    for (; idx < inner.q_prime; ++idx) {
      const i128 d0 = static_cast<i128>(inner.center0(idx)) - c0;
      if (d0 >= static_cast<i128>(wsum)) break;
      // per-axis overlap length = w_a + w_b - |center diff|, capped by box sides
      double vol = 1.0;
      u128 raw_len = 0;
      bool nonzero = true;
      for (int j = 0; j < outer.n; ++j) {
        const u64 cj = outer.center(j, ob), nj = inner.center(j, idx);
        const u64 dj = cj > nj ? cj - nj : nj - cj;
        if (dj >= wsum) {
          nonzero = false;
          break;
        }
        u64 len = wsum - dj;
        const u64 cap = 2 * std::min(outer.w_raw, inner.w_raw);
        if (len > cap) len = cap;
        if (outer.n == 1)
          raw_len = len;
        else
          vol *= raw_to_double(len);
      }
      if (!nonzero) continue;
      if (outer.n == 1)
        raw_sum_1d += raw_len;
      else
        vol_sum += vol;
    }
  }
  if (outer.n == 1) return u128_to_double(raw_sum_1d) * 0x1p-64;
  return vol_sum;
}

// ---- witness source -----------------------------------------------------------------------

WitnessSource make_witness_source(const SequenceSource& src, std::vector<u64> candidates,
                                  double C_target, const WitnessOptions& opt) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  auto idx = std::make_shared<size_t>(0);
  auto cands = std::make_shared<std::vector<u64>>(std::move(candidates));
  const SequenceSource source = src;
  return [idx, cands, source, C_target, opt]() -> std::optional<WitnessCertificate> {
    while (*idx < cands->size()) {
      const u64 q = (*cands)[(*idx)++];
      if (q == 0 || q > source.max_q()) continue;
      std::optional<WitnessCertificate> w;
      if (source.prefix)
        w = certify_witness(*source.prefix, q, C_target, opt);
      else
        w = certify_witness(*source.alpha, q, C_target, opt);
      if (w) return w;
    }
    return std::nullopt;
  };
}

// ---- induction ------------------------------------------------------------------------------

ConstructionLevel find_next_q(const ConstructionState& state, const SequenceSource& src,
                              WitnessSource& witnesses, double psi_next, OverlapStats* stats_out) {
  if (!(psi_next < 1.0) || !(psi_next >= 0x1p-40))
    throw std::invalid_argument("find_next_q: psi must lie in [2^-40, 1)");
  const u64 q_floor = state.levels.empty() ? 0 : state.levels.back().q;
  double last_ratio = 0;
  u64 last_q = 0;
  for (;;) {
    auto cert = witnesses();
    if (!cert) {
      std::ostringstream os;
      os << "construction stalled: witness candidates exhausted";
      if (last_q) os << "; last candidate q=" << last_q << " failed the overlap condition with worst ratio "
                     << last_ratio << " (allowed " << (1.0 + state.eps) << ")";
      throw ConstructionStalledError(os.str());
    }
    if (cert->q <= q_floor) continue;  // scales must increase strictly
    ConstructionLevel lv;
    try {
      lv = build_level(src, cert->q, state.C, psi_next);
    } catch (const std::invalid_argument&) {
      continue;  // covering grid refused (M < 4): not a usable witness scale
    }
    const auto stats = check_overlap_condition(lv, state.levels, state.eps);
    if (stats.pass) {
      lv.nu = state.levels.size() + 1;
      if (stats_out) *stats_out = stats;
      return lv;
    }
    last_ratio = stats.worst_ratio;
    last_q = cert->q;
  }
}

void admit_level(ConstructionState& state, ConstructionLevel level, const OverlapStats& stats) {
  LevelCheckReport rep;
  rep.nu = level.nu;
  rep.q = level.q;
  rep.q_prime = level.q_prime;
  rep.psi = level.psi;
  rep.measure = level.measure;
  rep.c_coeff = level.c_coeff;
  rep.overlap_worst_ratio = stats.worst_ratio;

  std::vector<double> row;
  row.reserve(state.levels.size());
  double min_slack = std::numeric_limits<double>::infinity();
  for (size_t l = 0; l < state.levels.size(); ++l) {
    const double mu_cap = pairwise_intersection_measure(state.levels[l], level);
    const double bound = (1.0 + state.eps) * state.measures[l] * level.measure;
    if (mu_cap > bound) {
      std::ostringstream os;
      os << "quasi-independence violated for levels (" << state.levels[l].nu << ", " << level.nu
         << "): mu(cap)=" << mu_cap << " > (1+eps)*mu*mu=" << bound
         << " although the overlap condition held";
      throw QuasiIndependenceError(os.str());
    }
    min_slack = std::min(min_slack, bound - mu_cap);
    row.push_back(mu_cap);
  }
  if (!state.levels.empty()) rep.min_pairwise_slack = min_slack;

  state.inter.push_back(std::move(row));
  state.measures.push_back(level.measure);
  state.measure_sum += level.measure;
  state.levels.push_back(std::move(level));
  state.checks.push_back(rep);
  state.schmidt_history.push_back(schmidt_lower_bound(state, state.levels.size()));
}

double schmidt_lower_bound(const ConstructionState& state, size_t t) {
  if (t == 0) throw std::invalid_argument("schmidt_lower_bound: t must be >= 1");
  if (t > state.levels.size())
    throw std::invalid_argument("schmidt_lower_bound: t exceeds admitted levels");
  double num = 0, denom = 0;
  for (size_t v = 0; v < t; ++v) {
    num += state.measures[v];
    denom += state.measures[v];  // diagonal
    for (size_t l = 0; l < v; ++l) denom += 2.0 * state.inter[v][l];
  }
  return num * num / denom;
}

ConstructionState run_construction(const SequenceSource& src, double C_target, double eps,
                                   const LevelSchedule& schedule, int level_count,
                                   std::vector<u64> candidates, const WitnessOptions& wopt) {
  if (level_count < 1) throw std::invalid_argument("run_construction: level count must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("run_construction: eps must be positive");
  if (static_cast<int>(schedule.values.size()) < level_count)
    throw std::invalid_argument("run_construction: schedule shorter than level count");

  ConstructionState state;
  state.n = src.dim();
  state.C = C_target;
  state.eps = eps;
  state.schedule = schedule;

  auto witnesses = make_witness_source(src, std::move(candidates), C_target, wopt);
  for (int nu = 1; nu <= level_count; ++nu) {
    OverlapStats stats;
    auto lv = find_next_q(state, src, witnesses, schedule.values[nu - 1], &stats);
    try {
      admit_level(state, std::move(lv), stats);
    } catch (const QuasiIndependenceError& e) {
      state.all_checks_passed = false;
      state.failure_note = e.what();
      return state;
    }
  }
  return state;
}

}  // namespace welldist
