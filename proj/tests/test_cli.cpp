#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string cmd = std::string(WELLDIST_CLI_PATH) + " " + args + " > " + out_path + " 2>cli_test_stderr.tmp";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  return r;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("psi --alpha golden --t 0").code == 2);
  CHECK(run_cli("construct --alpha golden --levels 0").code == 2);
  CHECK(run_cli("liminf --alpha golden --etas 0").code == 2);
  CHECK(run_cli("psi --t 5").code == 2);                       // no alpha
  CHECK(run_cli("disp --alpha golden --qs bogus").code == 2);  // unparsable scales
  CHECK(run_cli("nonsense").code == 2);
}

TEST_CASE("psi subcommand emits records and passes Dirichlet") {
  const auto r = run_cli("psi --alpha golden --t 1000");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("artifact_version") == "0.1.0");
  CHECK(j.at("config").at("alpha") == "golden");
  CHECK(j.at("profile").at("dirichlet").at("pass") == true);
  const auto& records = j.at("profile").at("records");
  REQUIRE(records.size() >= 10);
  CHECK(records[0].at("q") == 1);
  CHECK(records[5].at("q") == 13);
  CHECK(j.at("profile").at("singularity").at("classification") == "nonsingular-like");
}

TEST_CASE("psi on a rational direction reports the degenerate class") {
  const auto r = run_cli("psi --alpha 0.5 --t 10");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("profile").at("singularity").at("classification") == "rational-degenerate");
}

TEST_CASE("witness subcommand certifies Fibonacci scales for golden") {
  const auto r = run_cli("witness --alpha golden --qs fib:15 --c 3");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& certs = j.at("certificates");
  // fib:15 deduplicates to 14 distinct scales, all of which certify
  CHECK(certs.size() == 14);
  for (const auto& c : certs) CHECK(c.at("delta").get<double>() == c.at("C").get<double>() / 2);
}

TEST_CASE("witness search on the singular-like direction comes back empty") {
  const auto r = run_cli("witness --alpha golden,0 --n 2 --qs 10,100,1000 --c 3");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("certificates").empty());
}

TEST_CASE("disp subcommand on a sequence file") {
  const char* path = "cli_test_points.txt";
  {
    std::ofstream f(path);
    f << "# three points\n1 3\n0.25\n0.5\n0.75\n";
  }
  const auto r = run_cli(std::string("disp --input ") + path);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("results")[0].at("s_star").get<double>() == 0.25);
  std::remove(path);
}

TEST_CASE("construct pipeline end to end with explicit scales") {
  const auto r = run_cli("construct --alpha golden --levels 2 --eps 0.1 --qs 55,6765");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("report").at("all_checks_passed") == true);
  CHECK(j.at("report").at("levels").size() == 2);
  CHECK(j.at("report").at("schmidt_bound_history").size() == 2);
}

TEST_CASE("construct stalls with exit 3 when candidates run out") {
  const auto r = run_cli("construct --alpha golden --levels 2 --eps 0.1 --qs 55,89");
  CHECK(r.code == 3);
}

TEST_CASE("liminf emits record curves and the state hookup works") {
  const auto con = run_cli("construct --alpha golden --levels 2 --eps 0.1 --qs 55,6765 --out cli_test_state.json");
  REQUIRE(con.code == 0);
  const auto r =
      run_cli("liminf --alpha golden --etas 20 --seed 7 --k 10000 --state cli_test_state.json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("config").at("seed") == 7);
  CHECK(j.at("series").size() == 20);
  for (const auto& s : j.at("series")) {
    double prev = 1e300;
    for (const auto& cp : s.at("checkpoints")) {
      const double rec = cp[1].get<double>();
      CHECK(rec <= prev);
      prev = rec;
    }
  }
  CHECK(j.at("level_hits").at("per_level").size() == 2);
  CHECK(j.at("level_hits").at("center_bound_violations") == 0);
  std::remove("cli_test_state.json");
}

TEST_CASE("identical configs give byte-identical artifacts at any thread count") {
  const std::string args =
      "liminf --alpha golden,sqrt2 --n 2 --etas 40 --seed 11 --k 20000 --out cli_det_";
  const auto a = run_cli(args + "1.json --threads 1");
  const auto b = run_cli(args + "2.json --threads 3");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp("cli_det_1.json") == slurp("cli_det_2.json"));
  std::remove("cli_det_1.json");
  std::remove("cli_det_2.json");

  const auto c = run_cli("psi --alpha sqrt3 --t 100000 --out cli_det_3.json --threads 1");
  const auto d = run_cli("psi --alpha sqrt3 --t 100000 --out cli_det_4.json --threads 4");
  REQUIRE(c.code == 0);
  REQUIRE(d.code == 0);
  CHECK(slurp("cli_det_3.json") == slurp("cli_det_4.json"));
  std::remove("cli_det_3.json");
  std::remove("cli_det_4.json");
}
