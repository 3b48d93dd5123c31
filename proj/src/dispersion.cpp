#include "welldist/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "welldist/irrationality.hpp"
#include "welldist/kernels.hpp"

namespace welldist {
namespace {

double root_weight(u64 q, int n) {
  if (n == 1) return static_cast<double>(q);
  if (n == 2) return std::sqrt(static_cast<double>(q));
  return std::pow(static_cast<double>(q), 1.0 / n);
}

}  // namespace

bool side_within_constant(u128 s_raw, u64 q, int n, double C) {
  // q^{1/n} * s <= C  <=>  s_raw^n * q <= (C * 2^64)^n, all integers
  const u128 c_raw = scale_to_raw(C);
  const auto lhs = limbs_pow_mul(s_raw, n, q);
  const auto rhs = limbs_pow_mul(c_raw, n, 1);
  return limbs_cmp(lhs, rhs) <= 0;
}

DispersionResult dispersion_1d(const SequencePrefix& P) {
  if (P.n != 1) throw std::invalid_argument("dispersion_1d: need n = 1");
  if (P.q == 0) throw std::invalid_argument("dispersion_1d: empty prefix");
  const auto& pts = P.axes[0];
  std::vector<u64> sorted(pts.begin(), pts.begin() + P.q);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const u128 first = sorted.front();
  const u128 last_seg = ONE_RAW - sorted.back();
  u128 best_gap = 0;
  u64 best_gap_left = 0;
  for (size_t i = 1; i < sorted.size(); ++i) {
    const u128 gap = u128(sorted[i]) - sorted[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best_gap_left = sorted[i - 1];
    }
  }
  const u128 s = std::max<u128>({first, last_seg, best_gap});

  DispersionResult r;
  r.q = P.q;
  r.n = 1;
  r.s_star_raw = s;
  r.s_star = u128_to_double(s) * 0x1p-64;
  r.C_of_q = root_weight(P.q, 1) * r.s_star;
  // anchor tie-break: (0, closed) first, then coordinates ascending (open)
  if (first == s) {
    r.witness_anchor = {{0}, {0}};
  } else {
    u64 coord = std::numeric_limits<u64>::max();
    if (best_gap == s) coord = best_gap_left;
    if (last_seg == s && sorted.back() < coord) coord = sorted.back();
    r.witness_anchor = {{coord}, {1}};
  }
  return r;
}

std::optional<DispersionResult> anchored_dispersion_enum(const SequencePrefix& P,
                                                         std::optional<u128> abort_above_raw) {
  if (P.q == 0) throw std::invalid_argument("anchored_dispersion: empty prefix");
  const int n = P.n;
  const auto pts = P.axis_ptrs();

  // per-axis candidates: (0, closed) then distinct coordinates (open)
  std::vector<std::vector<u64>> cands(n);
  for (int j = 0; j < n; ++j) {
    std::vector<u64> c(P.axes[j].begin(), P.axes[j].begin() + P.q);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    cands[j].reserve(c.size() + 1);
    cands[j].push_back(0);  // slot 0 is the closed anchor at 0
    for (u64 v : c) cands[j].push_back(v);
  }

  const auto& kern = kernels::active();
  u128 best = 0;
  CandidateAnchor best_anchor;
  std::vector<size_t> idx(n, 0);
  std::vector<u64> c(n);
  std::vector<u8> strict(n);
  for (;;) {
    u64 cmax = 0;
    for (int j = 0; j < n; ++j) {
      c[j] = cands[j][idx[j]];
      strict[j] = idx[j] > 0;
      if (c[j] > cmax) cmax = c[j];
    }
    const u128 boundary = ONE_RAW - cmax;
    if (boundary > best) {  // otherwise this tuple cannot improve the max
      const u64 span = kern.min_empty_span(pts.data(), P.q, n, c.data(), strict.data());
      const u128 s = std::min<u128>(boundary, span);
      if (s > best) {
        best = s;
        best_anchor.coords = c;
        best_anchor.open = strict;
        if (abort_above_raw && best > *abort_above_raw) return std::nullopt;
      }
    }
    // odometer over candidate tuples (lexicographic)
    int j = n - 1;
    while (j >= 0 && ++idx[j] == cands[j].size()) idx[j--] = 0;
    if (j < 0) break;
  }

  DispersionResult r;
  r.q = P.q;
  r.n = n;
  r.s_star_raw = best;
  r.s_star = u128_to_double(best) * 0x1p-64;
  r.C_of_q = root_weight(P.q, n) * r.s_star;
  r.witness_anchor = std::move(best_anchor);
  return r;
}

DispersionResult anchored_dispersion(const SequencePrefix& P) {
  if (P.q == 0) throw std::invalid_argument("anchored_dispersion: empty prefix");
  if (P.n == 1) return dispersion_1d(P);
  return *anchored_dispersion_enum(P);
}

// ---- grid oracle ------------------------------------------------------------

namespace {

struct ActivePoint {
  u64 p1;
  u64 tail_span;  // max over tail axes of p_j - eta_j (>= 0 for active points)
};

}  // namespace

u128 grid_oracle_dispersion_raw(const SequencePrefix& P, double resolution) {
  if (!(resolution > 0.0) || !(resolution <= 0.1))
    throw std::invalid_argument("grid_oracle_dispersion: need 0 < resolution <= 0.1");
  if (P.q == 0) throw std::invalid_argument("grid_oracle_dispersion: empty prefix");
  const int n = P.n;
  const u64 G = static_cast<u64>(std::ceil(1.0 / resolution));
  const u64 step = static_cast<u64>(ONE_RAW / G);

  // odometer over the tail axes (1..n-1); axis 0 is swept with skip-ahead
  std::vector<u64> tail_idx(std::max(0, n - 1), 0);
  std::vector<ActivePoint> active;
  active.reserve(P.q);
  u128 best = 0;

  for (;;) {
    u64 tail_max_coord = 0;
    for (int j = 0; j + 1 < n; ++j) {
      const u64 e = tail_idx[j] * step;
      if (e > tail_max_coord) tail_max_coord = e;
    }
    if (ONE_RAW - tail_max_coord > best) {
      // collect points dominating the tail anchor, with their tail spans
      active.clear();
      for (u64 t = 0; t < P.q; ++t) {
        u64 span = 0;
        bool ok = true;
        for (int j = 1; j < n; ++j) {
          const u64 e = tail_idx[j - 1] * step;
          const u64 p = P.axes[j][t];
          if (p < e) {
            ok = false;
            break;
          }
          if (p - e > span) span = p - e;
        }
        if (ok) active.push_back({P.axes[0][t], span});
      }
      std::sort(active.begin(), active.end(),
                [](const ActivePoint& a, const ActivePoint& b) { return a.p1 < b.p1; });

      size_t ptr = 0;
      for (u64 i = 0; i < G;) {
        const u64 e1 = i * step;
        const u64 cmax = std::max(e1, tail_max_coord);
        const u128 boundary = ONE_RAW - cmax;
        if (boundary <= best && e1 >= tail_max_coord) break;  // boundary only shrinks from here
        while (ptr < active.size() && active[ptr].p1 < e1) ++ptr;
        if (boundary <= best) {
          ++i;
          continue;
        }
        // look for a blocker with value <= best: it kills every anchor up to its p1
        bool killed = false;
        for (size_t t = ptr; t < active.size(); ++t) {
          const u128 d1 = u128(active[t].p1) - e1;
          if (d1 > best) break;  // sorted: later points only grow
          if (active[t].tail_span <= best) {
            i = active[t].p1 / step + 1;  // first grid anchor strictly above p1
            killed = true;
            break;
          }
        }
        if (killed) continue;
        // no cheap kill: compute the exact empty side at this anchor
        u128 m = boundary;
        for (size_t t = ptr; t < active.size(); ++t) {
          const u128 d1 = u128(active[t].p1) - e1;
          if (d1 >= m) break;
          const u128 span = std::max<u128>(d1, active[t].tail_span);
          if (span < m) m = span;
        }
        if (m > best) best = m;
        ++i;
      }
    }
    if (n == 1) break;
    int j = n - 2;
    while (j >= 0 && ++tail_idx[j] == G) tail_idx[j--] = 0;
    if (j < 0) break;
  }
  return best;
}

double grid_oracle_dispersion(const SequencePrefix& P, double resolution) {
  return u128_to_double(grid_oracle_dispersion_raw(P, resolution)) * 0x1p-64;
}

// ---- covering radius ----------------------------------------------------------

CoveringRadius covering_radius_torus(const SequencePrefix& P, double resolution) {
  if (P.q == 0) throw std::invalid_argument("covering_radius_torus: empty prefix");
  CoveringRadius out;
  if (P.n == 1) {
    std::vector<u64> pts(P.axes[0].begin(), P.axes[0].begin() + P.q);
    const auto g = sorted_gap_structure(pts);
    out.exact = true;
    out.doubled_raw = g.rho_times2_raw;
    out.lower = out.upper = u128_to_double(g.rho_times2_raw) * 0x1p-65;
    return out;
  }
  if (!(resolution > 0.0) || !(resolution <= 0.5))
    throw std::invalid_argument("covering_radius_torus: need 0 < resolution <= 0.5");
  const int n = P.n;
  const u64 G = static_cast<u64>(std::ceil(1.0 / resolution));
  const u64 step = static_cast<u64>(ONE_RAW / G);
  const auto& kern = kernels::active();

  std::vector<u64> tail_idx(n - 1, 0);
  std::vector<u64> tail(P.q);
  u64 global = 0;
  for (;;) {
    for (u64 t = 0; t < P.q; ++t) {
      u64 m = 0;
      for (int j = 1; j < n; ++j) {
        const u64 e = tail_idx[j - 1] * step;
        const u64 d = torus_dist_raw(Frac64{P.axes[j][t]}, Frac64{e});
        if (d > m) m = d;
      }
      tail[t] = m;
    }
    const u64 row = kern.covrad_row(P.axes[0].data(), tail.data(), P.q, 0, step, G);
    if (row > global) global = row;
    int j = n - 2;
    while (j >= 0 && ++tail_idx[j] == G) tail_idx[j--] = 0;
    if (j < 0) break;
  }
  out.exact = false;
  out.lower = raw_to_double(global);
  out.upper = out.lower + resolution;
  return out;
}

// ---- witness search -----------------------------------------------------------

namespace {

WitnessCertificate make_cert(u64 q, int n, double C, u128 s_raw) {
  WitnessCertificate w;
  w.q = q;
  w.n = n;
  w.C = C;
  w.s_star_raw = s_raw;
  w.s_star = u128_to_double(s_raw) * 0x1p-64;
  w.delta = C / 2;
  return w;
}

void attach_rho(WitnessCertificate& w, const SequencePrefix& P, const WitnessOptions& opt) {
  const auto rho = covering_radius_torus(P, opt.rho_resolution);
  w.rho_lower = rho.lower;
  w.rho_upper = rho.upper;
  w.rho_exact = rho.exact;
  w.rho_doubled_raw = rho.doubled_raw;
}

}  // namespace

std::optional<WitnessCertificate> certify_witness(const SequencePrefix& P, u64 q, double C_target,
                                                  const WitnessOptions& opt) {
  if (q > P.q) throw std::invalid_argument("certify_witness: q exceeds prefix length");
  const SequencePrefix head_store = (q == P.q) ? SequencePrefix{} : P.head(q);
  const SequencePrefix& head = (q == P.q) ? P : head_store;
  u128 s_raw;
  if (P.n == 1) {
    s_raw = dispersion_1d(head).s_star_raw;
  } else {
    // Abort the enumeration once the dispersion provably exceeds the
    // certified side C/q^{1/n}; the threshold is nudged up so no borderline
    // case can be refused early (the exact compare below still decides).
    const double side = C_target / root_weight(q, P.n);
    const u128 abort_raw = scale_to_raw(std::min(1.0, side * (1.0 + 1e-9))) + 2;
    auto res = anchored_dispersion_enum(head, abort_raw);
    if (!res) return std::nullopt;
    s_raw = res->s_star_raw;
  }
  if (!side_within_constant(s_raw, q, P.n, C_target)) return std::nullopt;
  auto w = make_cert(q, P.n, C_target, s_raw);
  if (opt.want_rho) attach_rho(w, head, opt);
  return w;
}

std::optional<WitnessCertificate> certify_witness(const AlphaVector& alpha, u64 q, double C_target,
                                                  const WitnessOptions& opt) {
  if (alpha.dim() == 1 && q > opt.ladder_threshold) {
    const auto g = three_gap_structure(alpha.components[0].raw, q);
    if (g) {
      if (!side_within_constant(g->s_star_raw(), q, 1, C_target)) return std::nullopt;
      auto w = make_cert(q, 1, C_target, g->s_star_raw());
      if (opt.want_rho) {
        w.rho_exact = true;
        w.rho_doubled_raw = g->rho_times2_raw();
        w.rho_lower = w.rho_upper = u128_to_double(w.rho_doubled_raw) * 0x1p-65;
      }
      return w;
    }
    // degenerate orbit: fall through to the materialized route
  }
  return certify_witness(stream_prefix(alpha, q), q, C_target, opt);
}

namespace {

template <typename Source>
std::vector<WitnessCertificate> witness_search_impl(const Source& src,
                                                    const std::vector<u64>& q_candidates,
                                                    double C_target, const WitnessOptions& opt) {
  if (!(C_target > 0)) throw std::invalid_argument("witness_search: C_target must be positive");
  std::vector<WitnessCertificate> out;
  for (u64 q : q_candidates) {
    if (q == 0) throw std::invalid_argument("witness_search: q candidates must be >= 1");
    if (auto w = certify_witness(src, q, C_target, opt)) out.push_back(std::move(*w));
  }
  return out;
}

}  // namespace

std::vector<WitnessCertificate> witness_search(const AlphaVector& alpha,
                                               const std::vector<u64>& q_candidates, double C_target,
                                               const WitnessOptions& opt) {
  return witness_search_impl(alpha, q_candidates, C_target, opt);
}

std::vector<WitnessCertificate> witness_search(const SequencePrefix& P,
                                               const std::vector<u64>& q_candidates, double C_target,
                                               const WitnessOptions& opt) {
  return witness_search_impl(P, q_candidates, C_target, opt);
}

std::vector<u64> default_witness_candidates(const AlphaVector& alpha, u64 qmax) {
  std::vector<u64> out;
  if (qmax == 0) return out;
  out.push_back(1);
  if (alpha.dim() == 1) {
    // continued-fraction denominators of the defining literal
    const auto cf = cf_convergents(alpha.provenance, 200);
    for (const auto& c : cf.convergents) {
      if (c.q > qmax) break;
      const u64 q = static_cast<u64>(c.q);
      if (out.empty() || out.back() != q) out.push_back(q);
    }
  } else {
    const u64 T = std::min<u64>(qmax, u64(4) << 20);
    const auto prof = best_approx_records(alpha, T);
    for (const auto& r : prof.records)
      if (r.q <= qmax && (out.empty() || out.back() != r.q)) out.push_back(r.q);
  }
  return out;
}

}  // namespace welldist
