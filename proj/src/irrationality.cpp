#include "welldist/irrationality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "welldist/kernels.hpp"

namespace welldist {
namespace {

constexpr u64 kBlock = 1 << 13;

inline u64 scan_point_dist(const u64* alpha, int n, u64 q) {
  u64 d = 0;
  for (int j = 0; j < n; ++j) {
    const u64 v = q * alpha[j];
    const u64 neg = u64(0) - v;
    const u64 dj = v < neg ? v : neg;
    if (dj > d) d = dj;
  }
  return d;
}

double root_weight(u64 t, int n) {
  if (n == 1) return static_cast<double>(t);
  if (n == 2) return std::sqrt(static_cast<double>(t));
  return std::pow(static_cast<double>(t), 1.0 / n);
}

// psi_raw^n * t <= 2^(64n), exactly
bool dirichlet_holds(u64 psi_value_raw, u64 t, int n) {
  const auto lhs = limbs_pow_mul(psi_value_raw, n, t);
  std::vector<u64> rhs(static_cast<size_t>(n) + 1, 0);
  rhs[n] = 1;
  return limbs_cmp(lhs, rhs) <= 0;
}

}  // namespace

u64 psi_raw(const AlphaVector& alpha, u64 t) {
  if (t == 0) throw std::invalid_argument("psi: t must be >= 1");
  const auto& k = kernels::active();
  u64 best = std::numeric_limits<u64>::max();
  for (u64 q0 = 1; q0 <= t; q0 += kBlock) {
    const u64 len = std::min(kBlock, t - q0 + 1);
    const u64 m = k.psi_block_min(alpha.raw(), alpha.dim(), q0, len);
    if (m < best) best = m;
  }
  return best;
}

double psi(const AlphaVector& alpha, u64 t) { return raw_to_double(psi_raw(alpha, t)); }

IrrationalityProfile best_approx_records(const AlphaVector& alpha, u64 T) {
  if (T == 0) throw std::invalid_argument("best_approx_records: T must be >= 1");
  IrrationalityProfile prof;
  prof.alpha = alpha;
  prof.T = T;
  const auto& k = kernels::active();
  const int n = alpha.dim();
  u64 running = std::numeric_limits<u64>::max();
  for (u64 q0 = 1; q0 <= T; q0 += kBlock) {
    const u64 len = std::min(kBlock, T - q0 + 1);
    const u64 block_min = k.psi_block_min(alpha.raw(), n, q0, len);
    if (block_min >= running) continue;
    // an improvement lies in this block: walk it in order to place each record
    for (u64 q = q0; q < q0 + len; ++q) {
      const u64 d = scan_point_dist(alpha.raw(), n, q);
      if (d < running) {
        running = d;
        prof.records.push_back(BestApproxRecord{q, d, raw_to_double(d), 0, 0.0});
      }
    }
  }
  for (size_t i = 0; i < prof.records.size(); ++i) {
    auto& r = prof.records[i];
    r.t_end = (i + 1 < prof.records.size()) ? prof.records[i + 1].q - 1 : T;
    r.normalized = root_weight(r.t_end, n) * r.psi_value;
    if (r.normalized > prof.limsup_estimate) prof.limsup_estimate = r.normalized;
  }
  return prof;
}

DirichletReport dirichlet_check(const IrrationalityProfile& profile) {
  DirichletReport rep;
  rep.pass = true;
  const int n = profile.alpha.dim();
  for (const auto& r : profile.records) {
    // psi is constant on [q, t_end] while t^{1/n} grows, so the bound binds at t_end
    if (!dirichlet_holds(r.psi_raw, r.t_end, n)) rep.pass = false;
    if (r.normalized > rep.max_normalized) {
      rep.max_normalized = r.normalized;
      rep.argmax_t = r.t_end;
    }
  }
  return rep;
}

SingularityProfile singularity_profile(const AlphaVector& alpha, u64 T, double theta) {
  if (T < 2) throw std::invalid_argument("singularity_profile: T must be >= 2");
  SingularityProfile out;
  out.theta = theta;
  const auto prof = best_approx_records(alpha, T);
  bool exact_hit = false;
  for (const auto& r : prof.records) {
    out.local_maxima.emplace_back(r.t_end, r.normalized);
    if (r.psi_raw == 0) exact_hit = true;
  }
  if (exact_hit) {
    out.classification = "rational-degenerate";
    return out;
  }
  const size_t half = out.local_maxima.size() / 2;
  double tail_max = 0;
  bool tail_decreasing = true;
  for (size_t i = half; i < out.local_maxima.size(); ++i) {
    tail_max = std::max(tail_max, out.local_maxima[i].second);
    if (i > half && out.local_maxima[i].second > out.local_maxima[i - 1].second)
      tail_decreasing = false;
  }
  if (tail_max >= theta)
    out.classification = "nonsingular-like";
  else if (tail_decreasing)
    out.classification = "singular-like";
  else
    out.classification = "inconclusive";
  return out;
}

CfExpansion cf_convergents(std::string_view decimal_or_name, int count) {
  if (count < 1) throw std::invalid_argument("cf_convergents: count must be >= 1");
  std::string text(decimal_or_name);
  if (named_constant(text).has_value()) {
    // use the defining decimal expansions rather than the quantized raw
    if (text == "golden") text = "0.6180339887498948482045868343656381177203091798";
    else if (text == "sqrt2") text = "0.4142135623730950488016887242096980785696718753";
    else if (text == "sqrt3") text = "0.7320508075688772935274463415058723669428052538";
    else if (text == "liouville") {
      std::string digits(37, '0');
      for (int pos : {1, 2, 6, 24}) digits[pos - 1] = '1';
      text = "0." + digits;
    }
  }

  // exact rational num/10^d from up to 37 fractional digits (fits in u128)
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  u128 int_part = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
    int_part = int_part * 10 + static_cast<unsigned>(text[i++] - '0');
  u128 num = 0, den = 1;
  if (i < text.size() && text[i] == '.') {
    ++i;
    int digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (digits < 37) {
        num = num * 10 + static_cast<unsigned>(text[i] - '0');
        den *= 10;
        ++digits;
      }
      ++i;
    }
  }
  if (i != text.size()) throw std::invalid_argument("cf_convergents: bad literal '" + text + "'");
  if (neg && num != 0) num = den - num;  // fractional part of the negated value
  (void)int_part;                        // integer part does not affect ||q*x||

  CfExpansion out;
  // Euclid on (num, den); a_0 = 0 is implicit for x in [0,1) and its 0/1
  // convergent is dropped per our indexing convention.
  u128 p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
  u128 p_cur = 0, q_cur = 1;    // p_0/q_0
  u128 a = num, b = den;        // expanding b/a, since x = a/b < 1
  if (num == 0) {
    out.terminated = true;
    return out;
  }
  while (static_cast<int>(out.convergents.size()) < count) {
    const u128 quot = b / a;
    const u128 rem = b % a;
    const u128 p_next = quot * p_cur + p_prev;
    const u128 q_next = quot * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    out.convergents.push_back(Convergent{p_cur, q_cur});
    if (rem == 0) {
      out.terminated = true;
      break;
    }
    b = a;
    a = rem;
  }
  return out;
}

}  // namespace welldist
