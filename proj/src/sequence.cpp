#include "welldist/sequence.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace welldist {

const u64* AlphaVector::raw() const {
  static_assert(sizeof(Frac64) == sizeof(u64));
  return reinterpret_cast<const u64*>(components.data());
}

AlphaVector parse_alpha(std::string_view spec) {
  AlphaVector a;
  a.provenance = std::string(spec);
  size_t start = 0;
  while (start <= spec.size()) {
    size_t comma = spec.find(',', start);
    std::string_view part = spec.substr(start, comma == std::string_view::npos ? spec.size() - start
                                                                               : comma - start);
    if (part.empty()) throw std::invalid_argument("parse_alpha: empty component in '" + a.provenance + "'");
    if (auto named = named_constant(part)) {
      a.components.push_back(*named);
    } else {
      a.components.push_back(Frac64::from_decimal(part));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (a.components.empty()) throw std::invalid_argument("parse_alpha: empty spec");
  return a;
}

UnitPoint SequencePrefix::point(u64 k) const {
  if (k < 1 || k > q) throw std::out_of_range("SequencePrefix::point: index out of range");
  std::vector<Frac64> c(n);
  for (int j = 0; j < n; ++j) c[j] = Frac64::from_raw(axes[j][k - 1]);
  return UnitPoint(std::move(c));
}

std::vector<const u64*> SequencePrefix::axis_ptrs() const {
  std::vector<const u64*> p(n);
  for (int j = 0; j < n; ++j) p[j] = axes[j].data();
  return p;
}

SequencePrefix SequencePrefix::head(u64 q_sub) const {
  if (q_sub > q) throw std::invalid_argument("SequencePrefix::head: longer than prefix");
  SequencePrefix h;
  h.n = n;
  h.q = q_sub;
  h.source = source;
  h.axes.resize(n);
  for (int j = 0; j < n; ++j) h.axes[j].assign(axes[j].begin(), axes[j].begin() + q_sub);
  return h;
}

UnitPoint kronecker_point(const AlphaVector& alpha, u64 k) {
  if (k == 0) throw std::invalid_argument("kronecker_point: k must be >= 1");
  std::vector<Frac64> c(alpha.dim());
  for (int j = 0; j < alpha.dim(); ++j) c[j] = alpha.components[j].times(k);
  return UnitPoint(std::move(c));
}

SequencePrefix stream_prefix(const AlphaVector& alpha, u64 q) {
  if (q == 0) throw std::invalid_argument("stream_prefix: q must be >= 1");
  SequencePrefix p;
  p.n = alpha.dim();
  p.q = q;
  p.source = "kronecker:" + alpha.provenance;
  p.axes.resize(p.n);
  for (int j = 0; j < p.n; ++j) {
    auto& ax = p.axes[j];
    ax.resize(q);
    const u64 a = alpha.components[j].raw;
    u64 cur = 0;
    for (u64 k = 0; k < q; ++k) ax[k] = (cur += a);  // exact orbit of the quantized direction
  }
  return p;
}

namespace {

bool parse_u64_token(std::string_view tok, u64& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

[[noreturn]] void line_error(std::string_view source, u64 line_no, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line_no << ": " << what;
  throw std::invalid_argument(os.str());
}

}  // namespace

SequencePrefix parse_sequence_text(std::string_view text, u64 q_want, std::string_view source_name) {
  SequencePrefix p;
  p.source = std::string(source_name);
  std::istringstream in{std::string(text)};
  std::string line;
  u64 line_no = 0;
  bool header_seen = false;
  u64 declared_q = 0;
  u64 loaded = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    if (auto pos = sv.find('#'); pos != std::string_view::npos) sv = sv.substr(0, pos);
    std::istringstream ls{std::string(sv)};
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (!header_seen) {
      u64 nn = 0;
      if (toks.size() != 2 || !parse_u64_token(toks[0], nn) || !parse_u64_token(toks[1], declared_q) ||
          nn == 0)
        line_error(p.source, line_no, "expected header 'n q'");
      p.n = static_cast<int>(nn);
      p.axes.resize(p.n);
      header_seen = true;
      continue;
    }
    if (static_cast<int>(toks.size()) != p.n)
      line_error(p.source, line_no, "expected " + std::to_string(p.n) + " coordinates");
    for (int j = 0; j < p.n; ++j) {
      Frac64 v;
      try {
        v = Frac64::from_decimal(toks[j]);
      } catch (const std::exception&) {
        line_error(p.source, line_no, "bad coordinate '" + toks[j] + "'");
      }
      // decimal literals must denote values in [0,1); anything with a nonzero
      // integer part or a sign is rejected here even though frac() would wrap
      const std::string_view tok = toks[j];
      if (tok.find('-') != std::string_view::npos || tok.find('+') != std::string_view::npos)
        line_error(p.source, line_no, "coordinate out of [0,1): '" + toks[j] + "'");
      for (char ch : tok) {
        if (ch == '.') break;
        if (ch != '0') line_error(p.source, line_no, "coordinate out of [0,1): '" + toks[j] + "'");
      }
      p.axes[j].push_back(v.raw);
    }
    ++loaded;
  }
  if (!header_seen) throw std::invalid_argument(p.source + ": empty file (missing 'n q' header)");
  if (loaded < declared_q)
    throw std::invalid_argument(p.source + ": header declares " + std::to_string(declared_q) +
                                " points but file holds " + std::to_string(loaded));
  p.q = declared_q;
  for (auto& ax : p.axes) ax.resize(p.q);
  if (q_want > 0) {
    if (p.q < q_want)
      throw std::invalid_argument(p.source + ": requested q=" + std::to_string(q_want) +
                                  " but file provides only " + std::to_string(p.q));
    p.q = q_want;
    for (auto& ax : p.axes) ax.resize(p.q);
  }
  if (p.q == 0) throw std::invalid_argument(p.source + ": empty sequence");
  return p;
}

SequencePrefix stream_prefix_file(const std::string& path, u64 q_want) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open sequence file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_sequence_text(buf.str(), q_want, path);
}

}  // namespace welldist
