#pragma once

// Exact fixed-point arithmetic on the unit circle. A Frac64 stores
// raw/2^64 in [0,1); addition mod 1 and multiplication by an integer mod 1
// are wrapping 64-bit operations and therefore exact in the quantized space,
// bit-reproducible everywhere. Quantization error against a true real input
// is at most k*2^-64 after k orbit steps.

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "welldist/util.hpp"

namespace welldist {

struct Frac64 {
  u64 raw = 0;

  static Frac64 from_raw(u64 r) { return Frac64{r}; }

  // {x} = x - floor(x), quantized round-to-nearest. Throws on non-finite x.
  static Frac64 from_double(double x);

  // Exact quantization of a decimal literal ("0.61803...", "-0.25", "1.25");
  // any number of fractional digits, round-to-nearest ties-to-even. The
  // integer part only contributes its sign/wrap (fractional part semantics).
  static Frac64 from_decimal(std::string_view text);

  double to_double() const { return raw_to_double(raw); }

  Frac64 operator+(Frac64 o) const { return Frac64{raw + o.raw}; }  // mod 1
  Frac64 operator-(Frac64 o) const { return Frac64{raw - o.raw}; }  // mod 1
  Frac64 times(u64 k) const { return Frac64{raw * k}; }             // {k*x}

  auto operator<=>(const Frac64&) const = default;
};

// {x} for finite doubles (invalid-argument on NaN/inf)
Frac64 frac(double x);

// distance to the nearest integer of the difference, in raw units (<= 2^63)
inline u64 torus_dist_raw(Frac64 a, Frac64 b) {
  u64 d = a.raw - b.raw;
  u64 n = u64(0) - d;
  return d < n ? d : n;
}

// min(|x-y|, 1-|x-y|) in [0, 1/2]
inline double torus_dist(Frac64 a, Frac64 b) { return raw_to_double(torus_dist_raw(a, b)); }

// ||x|| = distance from x to the nearest integer
inline u64 dist_to_int_raw(Frac64 a) { return torus_dist_raw(a, Frac64{0}); }

// Named directions with exact >=40-digit decimal sources: "golden" (phi-1),
// "sqrt2" (sqrt(2)-1), "sqrt3" (sqrt(3)-1), "liouville" (sum of 10^-m! for
// m <= 5, truncated).
std::optional<Frac64> named_constant(std::string_view name);

}  // namespace welldist
