#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "welldist/sequence.hpp"

using namespace welldist;

TEST_CASE("kronecker_point basics") {
  const auto half = parse_alpha("0.5");
  CHECK(kronecker_point(half, 3)[0].to_double() == 0.5);
  CHECK_THROWS_AS(kronecker_point(half, 0), std::invalid_argument);

  // rational second coordinate returns exactly to 0 after its period
  const auto mixed = parse_alpha("0.333333333333333333333333333333,0.25");
  const auto p12 = kronecker_point(mixed, 12);
  CHECK(p12[1].raw == 0);
}

TEST_CASE("kronecker orbit against the high-precision decimal oracle") {
  // {k (phi-1)} for k = 1..5, 22 digits each; the quantized orbit may differ
  // from the real one by at most k ulps
  const auto golden = parse_alpha("golden");
  const char* expect[] = {"0.6180339887498948482046", "0.2360679774997896964092",
                          "0.8541019662496845446138", "0.4721359549995793928183",
                          "0.0901699437494742410229"};
  for (u64 k = 1; k <= 5; ++k) {
    const u64 want = Frac64::from_decimal(expect[k - 1]).raw;
    const u64 got = kronecker_point(golden, k)[0].raw;
    const u64 diff = want > got ? want - got : got - want;
    CHECK(diff <= k);
  }
}

TEST_CASE("incremental and direct evaluation agree bit-exactly") {
  const auto a = parse_alpha("golden,sqrt2,0.1237182");
  UnitPoint cur = kronecker_point(a, 1);
  for (u64 k = 2; k <= 500; ++k) {
    for (int j = 0; j < a.dim(); ++j) cur.coords[j] = cur.coords[j] + a.components[j];
    const auto direct = kronecker_point(a, k);
    for (int j = 0; j < a.dim(); ++j) CHECK(cur[j].raw == direct[j].raw);
  }
}

TEST_CASE("dyadic rational coordinates are periodic") {
  const auto a = parse_alpha("0.625");  // 5/8: period divides 8
  const auto p = stream_prefix(a, 16);
  for (u64 k = 1; k <= 8; ++k) CHECK(p.axes[0][k - 1] == p.axes[0][k + 8 - 1]);
}

TEST_CASE("stream_prefix prefixes are consistent") {
  const auto a = parse_alpha("golden,0.25");
  const auto p10 = stream_prefix(a, 10);
  const auto p6 = stream_prefix(a, 6);
  for (int j = 0; j < 2; ++j)
    for (u64 k = 0; k < 6; ++k) CHECK(p10.axes[j][k] == p6.axes[j][k]);
  CHECK(p10.head(6).axes == p6.axes);
  CHECK_THROWS_AS(stream_prefix(a, 0), std::invalid_argument);
}

TEST_CASE("golden prefix values match the stated decimals") {
  const auto p = stream_prefix(parse_alpha("golden"), 5);
  const double expect[] = {0.61803, 0.23607, 0.85410, 0.47214, 0.09017};
  for (u64 k = 0; k < 5; ++k)
    CHECK(raw_to_double(p.axes[0][k]) == doctest::Approx(expect[k]).epsilon(1e-4));
}

TEST_CASE("sequence file parsing") {
  const char* good =
      "# comment\n"
      "2 3\n"
      "0.1 0.2\n"
      "0.3 0.4   # trailing comment\n"
      "0.5 0.6\n";
  const auto p = parse_sequence_text(good, 0, "mem");
  CHECK(p.n == 2);
  CHECK(p.q == 3);
  CHECK(raw_to_double(p.axes[1][2]) == doctest::Approx(0.6).epsilon(1e-12));

  // short file: header declares more points than present
  CHECK_THROWS_WITH_AS(parse_sequence_text("1 5\n0.1\n0.2\n0.3\n", 0, "mem"),
                       doctest::Contains("holds 3"), std::invalid_argument);
  // q_want beyond the file
  CHECK_THROWS_WITH_AS(parse_sequence_text("1 3\n0.1\n0.2\n0.3\n", 5, "mem"),
                       doctest::Contains("only 3"), std::invalid_argument);
  // malformed coordinate aborts with the line number
  CHECK_THROWS_WITH_AS(parse_sequence_text("1 2\n0.1\nx.2\n", 0, "mem"), doctest::Contains("mem:3"),
                       std::invalid_argument);
  // out-of-range coordinate
  CHECK_THROWS_AS(parse_sequence_text("1 1\n1.5\n", 0, "mem"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sequence_text("1 1\n-0.5\n", 0, "mem"), std::invalid_argument);
  // wrong arity
  CHECK_THROWS_WITH_AS(parse_sequence_text("2 1\n0.1\n", 0, "mem"), doctest::Contains("mem:2"),
                       std::invalid_argument);
  // empty / missing header
  CHECK_THROWS_AS(parse_sequence_text("# nothing\n", 0, "mem"), std::invalid_argument);
}

TEST_CASE("alpha parsing") {
  CHECK(parse_alpha("golden,0").dim() == 2);
  CHECK(parse_alpha("0.5").components[0].raw == u64(1) << 63);
  CHECK_THROWS_AS(parse_alpha(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha("golden,,0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha("bogusname"), std::invalid_argument);
}
