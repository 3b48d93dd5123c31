#include "welldist/frac64.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace welldist {

Frac64 Frac64::from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("frac: non-finite input");
  double y = x - std::floor(x);
  if (y >= 1.0) y = 0.0;  // e.g. tiny negative x where 1-|x| rounds to 1
  if (y < 0.0) y = 0.0;
  u128 scaled = scale64_round(y);
  return Frac64{static_cast<u64>(scaled)};  // 2^64 wraps to 0 (mod 1)
}

Frac64 frac(double x) { return Frac64::from_double(x); }

namespace {

// One multiply-by-two pass over a base-10 fraction 0.d0 d1 d2...; returns the
// integer bit that carries out. Digits are mutated in place.
int double_digits(std::vector<u8>& d) {
  int carry = 0;
  for (size_t i = d.size(); i-- > 0;) {
    int v = d[i] * 2 + carry;
    d[i] = static_cast<u8>(v % 10);
    carry = v / 10;
  }
  return carry;
}

bool all_zero(const std::vector<u8>& d) {
  for (u8 v : d)
    if (v) return false;
  return true;
}

}  // namespace

Frac64 Frac64::from_decimal(std::string_view text) {
  size_t i = 0;
  auto fail = [&] { throw std::invalid_argument("Frac64::from_decimal: bad literal '" + std::string(text) + "'"); };
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  const bool negative = !text.empty() && text[0] == '-';
  size_t int_digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++int_digits;
  std::vector<u8> fracd;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      fracd.push_back(static_cast<u8>(text[i] - '0'));
      ++i;
    }
  }
  if (i != text.size() || (int_digits == 0 && fracd.empty())) fail();

  // Extract 64 binary digits of the fractional part, then round to nearest
  // (ties to even) using one more doubling plus a residue test.
  u64 raw = 0;
  for (int bit = 0; bit < 64; ++bit) raw = (raw << 1) | static_cast<u64>(double_digits(fracd));
  int next = double_digits(fracd);
  if (next == 1 && !all_zero(fracd)) {
    ++raw;  // > half
  } else if (next == 1) {
    if (raw & 1) ++raw;  // exact tie -> even
  }
  if (negative) raw = u64(0) - raw;  // {-x} = 1 - {x} mod 1
  return Frac64{raw};
}

std::optional<Frac64> named_constant(std::string_view name) {
  // 48-digit expansions; quantization needs well under 30 correct digits.
  if (name == "golden")
    return Frac64::from_decimal("0.618033988749894848204586834365638117720309179805");
  if (name == "sqrt2")
    return Frac64::from_decimal("0.414213562373095048801688724209698078569671875376");
  if (name == "sqrt3")
    return Frac64::from_decimal("0.732050807568877293527446341505872366942805253810");
  if (name == "liouville") {
    // sum of 10^-m! for m = 1..5: ones at fractional positions 1, 2, 6, 24, 120
    std::string digits(120, '0');
    for (int pos : {1, 2, 6, 24, 120}) digits[pos - 1] = '1';
    return Frac64::from_decimal("0." + digits);
  }
  return std::nullopt;
}

}  // namespace welldist
