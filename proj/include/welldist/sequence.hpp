#pragma once

// Kronecker sequence generation and file ingestion. Prefixes are stored
// structure-of-arrays (one raw vector per axis) so the scan kernels can
// stream them; indices are 1-based and order-preserving.

#include <string>
#include <string_view>
#include <vector>

#include "welldist/frac64.hpp"
#include "welldist/geometry.hpp"

namespace welldist {

struct AlphaVector {
  std::vector<Frac64> components;  // fractional parts; losslessly equivalent for all torus math
  std::string provenance;          // the spec string this was parsed from

  int dim() const { return static_cast<int>(components.size()); }
  const u64* raw() const;  // contiguous raw view (components are just wrapped u64s)
};

// Parses "golden", "0.5", "golden,0", "sqrt2,0.25,...": comma-separated
// components, each a named constant or a decimal literal.
AlphaVector parse_alpha(std::string_view spec);

struct SequencePrefix {
  int n = 0;
  u64 q = 0;
  std::vector<std::vector<u64>> axes;  // axes[j][k-1] = raw coordinate j of point k
  std::string source;

  UnitPoint point(u64 k) const;  // 1-based
  std::vector<const u64*> axis_ptrs() const;
  SequencePrefix head(u64 q_sub) const;
};

// {k * alpha} componentwise, exact in the quantized space. k >= 1.
UnitPoint kronecker_point(const AlphaVector& alpha, u64 k);

// First q Kronecker points.
SequencePrefix stream_prefix(const AlphaVector& alpha, u64 q);

// Reads the text format: first data line "n q", then q lines of n decimals
// in [0,1); '#' starts a comment line. Errors carry 1-based line numbers.
// Requires at least q_want points (q_want = 0 means take all).
SequencePrefix stream_prefix_file(const std::string& path, u64 q_want);

// Parses the same format from an in-memory string (used by tests and stdin).
SequencePrefix parse_sequence_text(std::string_view text, u64 q_want, std::string_view source_name);

}  // namespace welldist
