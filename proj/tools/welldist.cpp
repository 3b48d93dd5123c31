// welldist: well-distribution certificates, irrationality profiles, the
// covering construction, and record-curve tracking for point sequences on
// [0,1)^n.
//
// Exit codes: 0 success, 1 internal check failure, 2 usage error,
// 3 construction stalled.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "welldist/io.hpp"

namespace wd = welldist;
using wd::u64;
using json = wd::io::json;

namespace {

struct SourceArgs {
  std::string alpha_spec;
  std::string input_path;
  int n_expected = 0;

  std::optional<wd::AlphaVector> alpha;
  std::optional<wd::SequencePrefix> prefix;

  void load(u64 q_want = 0) {
    if (alpha_spec.empty() == input_path.empty())
      throw std::invalid_argument("provide exactly one of --alpha and --input");
    if (!alpha_spec.empty()) {
      alpha = wd::parse_alpha(alpha_spec);
      if (n_expected && alpha->dim() != n_expected)
        throw std::invalid_argument("--n disagrees with the alpha component count");
    } else {
      prefix = wd::stream_prefix_file(input_path, q_want);
      if (n_expected && prefix->n != n_expected)
        throw std::invalid_argument("--n disagrees with the input file dimension");
    }
  }

  wd::SequenceSource source() const {
    wd::SequenceSource s;
    if (alpha) s.alpha = &*alpha;
    if (prefix) s.prefix = &*prefix;
    return s;
  }

  int dim() const { return alpha ? alpha->dim() : prefix->n; }

  json config_json() const {
    json c;
    if (alpha) c["alpha"] = alpha->provenance;
    if (prefix) c["input"] = prefix->source;
    c["n"] = dim();
    return c;
  }
};

std::vector<u64> fibonacci(int count) {
  std::vector<u64> out;
  u64 a = 1, b = 1;
  for (int i = 0; i < count; ++i) {
    if (out.empty() || out.back() != a) out.push_back(a);
    const u64 next = a + b;
    a = b;
    b = next;
  }
  return out;
}

std::vector<u64> parse_qs(const std::string& spec, const SourceArgs& src, u64 qmax) {
  std::vector<u64> out;
  if (spec == "auto") {
    if (!src.alpha)
      throw std::invalid_argument("--qs auto needs --alpha (file sources require explicit scales)");
    return wd::default_witness_candidates(*src.alpha, qmax);
  }
  if (spec.rfind("fib:", 0) == 0) return fibonacci(std::stoi(spec.substr(4)));
  if (auto dots = spec.find(".."); dots != std::string::npos) {
    const u64 a = std::stoull(spec.substr(0, dots));
    const u64 b = std::stoull(spec.substr(dots + 2));
    if (a == 0 || b < a) throw std::invalid_argument("bad range in --qs");
    for (u64 q = a; q <= b; ++q) out.push_back(q);
    return out;
  }
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    out.push_back(std::stoull(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty --qs");
  return out;
}

void emit(const json& artifact, const std::string& out_path, const std::string& csv,
          const std::string& csv_path) {
  const std::string text = artifact.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    wd::io::write_file(out_path, text);
  if (!csv_path.empty()) wd::io::write_file(csv_path, csv);
}

std::vector<u64> default_checkpoints(u64 k_max) {
  std::vector<u64> cps;
  for (u64 k = 1; k < k_max; k *= 2) cps.push_back(k);
  cps.push_back(k_max);
  return cps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"well-distribution certificates, irrationality profiles, covering construction"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (also WELLDIST_THREADS)");

  // ---- psi ----
  auto* psi_cmd = app.add_subcommand("psi", "irrationality measure profile and diagnostics");
  SourceArgs psi_src;
  u64 psi_t = 100000;
  double theta = 0.05;
  std::string psi_out, psi_csv;
  psi_cmd->add_option("--alpha", psi_src.alpha_spec, "direction vector (named or decimals)");
  psi_cmd->add_option("--n", psi_src.n_expected, "expected dimension");
  psi_cmd->add_option("--t", psi_t, "scan bound T")->required();
  psi_cmd->add_option("--theta", theta, "non-singularity threshold (heuristic)");
  psi_cmd->add_option("--out", psi_out, "JSON output path (default stdout)");
  psi_cmd->add_option("--csv", psi_csv, "CSV output path");

  // ---- disp ----
  auto* disp_cmd = app.add_subcommand("disp", "anchored dispersion and covering radius");
  SourceArgs disp_src;
  std::string disp_qs, disp_out, disp_csv;
  double rho_res = 0.01;
  bool no_rho = false;
  disp_cmd->add_option("--alpha", disp_src.alpha_spec, "direction vector");
  disp_cmd->add_option("--input", disp_src.input_path, "sequence file");
  disp_cmd->add_option("--n", disp_src.n_expected, "expected dimension");
  disp_cmd->add_option("--qs", disp_qs, "prefix lengths: fib:N | a..b | list (default: full input)");
  disp_cmd->add_option("--rho-res", rho_res, "grid resolution for the covering radius (n >= 2)");
  disp_cmd->add_flag("--no-rho", no_rho, "skip the covering radius");
  disp_cmd->add_option("--out", disp_out, "JSON output path");
  disp_cmd->add_option("--csv", disp_csv, "CSV output path");

  // ---- witness ----
  auto* wit_cmd = app.add_subcommand("witness", "certify well-distribution scales");
  SourceArgs wit_src;
  std::string wit_qs = "auto", wit_out, wit_csv;
  double c_target = 3.0;
  u64 wit_qmax = 100000000;
  double wit_rho_res = 0.01;
  wit_cmd->add_option("--alpha", wit_src.alpha_spec, "direction vector");
  wit_cmd->add_option("--input", wit_src.input_path, "sequence file");
  wit_cmd->add_option("--n", wit_src.n_expected, "expected dimension");
  wit_cmd->add_option("--qs", wit_qs, "candidate scales: auto | fib:N | a..b | list");
  wit_cmd->add_option("--c", c_target, "target constant C");
  wit_cmd->add_option("--qmax", wit_qmax, "cap for auto candidates");
  wit_cmd->add_option("--rho-res", wit_rho_res, "covering-radius grid resolution (n >= 2)");
  wit_cmd->add_option("--out", wit_out, "JSON output path");
  wit_cmd->add_option("--csv", wit_csv, "CSV output path");

  // ---- construct ----
  auto* con_cmd = app.add_subcommand("construct", "run the covering construction");
  SourceArgs con_src;
  int levels = 5;
  double eps = 0.1, con_c = 3.0;
  std::string schedule_kind = "harmonic", con_qs = "auto", con_out, con_csv;
  u64 con_qmax = 500000000;
  con_cmd->add_option("--alpha", con_src.alpha_spec, "direction vector");
  con_cmd->add_option("--input", con_src.input_path, "sequence file");
  con_cmd->add_option("--n", con_src.n_expected, "expected dimension");
  con_cmd->add_option("--levels", levels, "number of levels")->required();
  con_cmd->add_option("--eps", eps, "quasi-independence epsilon");
  con_cmd->add_option("--c", con_c, "witness constant C");
  con_cmd->add_option("--schedule", schedule_kind, "psi schedule kind (harmonic)");
  con_cmd->add_option("--qs", con_qs, "witness candidates: auto | fib:N | a..b | list");
  con_cmd->add_option("--qmax", con_qmax, "cap for auto candidates");
  con_cmd->add_option("--out", con_out, "JSON output path");
  con_cmd->add_option("--csv", con_csv, "CSV output path (t, schmidt_bound)");

  // ---- liminf ----
  auto* lim_cmd = app.add_subcommand("liminf", "record curves toward the liminf statement");
  SourceArgs lim_src;
  u64 etas = 200, seed = 12345;
  double k_max_d = 1e6;
  std::string lim_out, lim_csv, state_path;
  lim_cmd->add_option("--alpha", lim_src.alpha_spec, "direction vector");
  lim_cmd->add_option("--input", lim_src.input_path, "sequence file");
  lim_cmd->add_option("--n", lim_src.n_expected, "expected dimension");
  lim_cmd->add_option("--etas", etas, "number of sampled targets")->required();
  lim_cmd->add_option("--seed", seed, "target sampling seed");
  lim_cmd->add_option("--k", k_max_d, "stream length K (accepts 1e6 style)");
  lim_cmd->add_option("--state", state_path, "construction report JSON for level-hit statistics");
  lim_cmd->add_option("--out", lim_out, "JSON output path");
  lim_cmd->add_option("--csv", lim_csv, "CSV output path (eta_id, K, record)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (threads > 0) setenv("WELLDIST_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (psi_cmd->parsed()) {
      if (psi_t == 0) throw std::invalid_argument("--t must be >= 1");
      psi_src.load();
      if (!psi_src.alpha) throw std::invalid_argument("psi needs --alpha");
      const auto prof = wd::best_approx_records(*psi_src.alpha, psi_t);
      const auto dir = wd::dirichlet_check(prof);
      const auto sing = wd::singularity_profile(*psi_src.alpha, psi_t, theta);
      json cfg = psi_src.config_json();
      cfg["t"] = psi_t;
      cfg["theta"] = theta;
      json artifact = wd::io::envelope(std::move(cfg));
      artifact["profile"] = wd::io::profile_json(prof, dir, sing);
      emit(artifact, psi_out, wd::io::csv_profile(prof), psi_csv);
      return dir.pass ? 0 : 1;
    }

    if (disp_cmd->parsed()) {
      disp_src.load();
      std::vector<u64> qs;
      if (disp_qs.empty()) {
        if (!disp_src.prefix) throw std::invalid_argument("disp with --alpha needs --qs");
        qs.push_back(disp_src.prefix->q);
      } else {
        qs = parse_qs(disp_qs, disp_src, /*qmax=*/u64(1) << 40);
      }
      std::vector<wd::DispersionResult> rows;
      std::vector<wd::CoveringRadius> rhos;
      for (u64 q : qs) {
        wd::SequencePrefix head;
        if (disp_src.prefix)
          head = disp_src.prefix->head(q);
        else
          head = wd::stream_prefix(*disp_src.alpha, q);
        rows.push_back(wd::anchored_dispersion(head));
        if (!no_rho) rhos.push_back(wd::covering_radius_torus(head, rho_res));
      }
      json cfg = disp_src.config_json();
      cfg["qs"] = qs;
      cfg["rho_res"] = rho_res;
      json artifact = wd::io::envelope(std::move(cfg));
      json results = json::array();
      for (size_t i = 0; i < rows.size(); ++i)
        results.push_back(wd::io::dispersion_json(rows[i], no_rho ? nullptr : &rhos[i]));
      artifact["results"] = std::move(results);
      emit(artifact, disp_out, wd::io::csv_dispersion(rows, rhos), disp_csv);
      return 0;
    }

    if (wit_cmd->parsed()) {
      wit_src.load();
      const auto qs = parse_qs(wit_qs, wit_src, wit_qmax);
      wd::WitnessOptions opt;
      opt.rho_resolution = wit_rho_res;
      std::vector<wd::WitnessCertificate> certs;
      if (wit_src.alpha)
        certs = wd::witness_search(*wit_src.alpha, qs, c_target, opt);
      else
        certs = wd::witness_search(*wit_src.prefix, qs, c_target, opt);
      json cfg = wit_src.config_json();
      cfg["qs"] = wit_qs;
      cfg["C"] = c_target;
      json artifact = wd::io::envelope(std::move(cfg));
      json arr = json::array();
      for (const auto& w : certs) arr.push_back(wd::io::certificate_json(w));
      artifact["certificates"] = std::move(arr);
      artifact["candidates_tested"] = qs.size();
      std::string csv = "q,C,s_star,rho_lower,rho_upper,delta\n";
      for (const auto& w : certs)
        csv += std::to_string(w.q) + "," + wd::io::fmt_double(w.C) + "," +
               wd::io::fmt_double(w.s_star) + "," + wd::io::fmt_double(w.rho_lower) + "," +
               wd::io::fmt_double(w.rho_upper) + "," + wd::io::fmt_double(w.delta) + "\n";
      emit(artifact, wit_out, csv, wit_csv);
      return 0;
    }

    if (con_cmd->parsed()) {
      if (levels < 1) throw std::invalid_argument("--levels must be >= 1");
      con_src.load();
      const auto src = con_src.source();
      const auto schedule = wd::psi_schedule(schedule_kind, con_src.dim(), levels);
      const auto qs = parse_qs(con_qs, con_src, con_qmax);
      wd::WitnessOptions opt;
      opt.want_rho = false;
      const auto state = wd::run_construction(src, con_c, eps, schedule, levels, qs, opt);
      json cfg = con_src.config_json();
      cfg["levels"] = levels;
      cfg["eps"] = eps;
      cfg["C"] = con_c;
      cfg["schedule"] = schedule_kind;
      cfg["qmax"] = con_qmax;
      json artifact = wd::io::envelope(std::move(cfg));
      artifact["report"] = wd::io::construction_json(state);
      emit(artifact, con_out, wd::io::csv_schmidt(state), con_csv);
      return state.all_checks_passed ? 0 : 1;
    }

    if (lim_cmd->parsed()) {
      if (etas == 0) throw std::invalid_argument("--etas must be >= 1");
      const u64 k_max = static_cast<u64>(k_max_d);
      if (k_max == 0) throw std::invalid_argument("--k must be >= 1");
      lim_src.load();
      const auto src = lim_src.source();
      const auto targets = wd::sample_etas(lim_src.dim(), etas, seed);
      const auto cps = default_checkpoints(k_max);
      const auto series = wd::record_tracker(src, targets, cps);
      // rational-direction warning: the orbit is finite, records plateau
      if (lim_src.alpha) {
        const u64 probe = std::min<u64>(k_max, 100000);
        if (wd::psi_raw(*lim_src.alpha, probe) == 0)
          std::cerr << "warning: rational direction; the orbit is periodic and records plateau\n";
      }
      json cfg = lim_src.config_json();
      cfg["etas"] = etas;
      cfg["seed"] = seed;
      cfg["k"] = k_max;
      json artifact = wd::io::envelope(std::move(cfg));
      artifact["series"] = wd::io::record_series_json(series);
      if (!state_path.empty()) {
        std::ifstream f(state_path);
        if (!f) throw std::invalid_argument("cannot open --state file " + state_path);
        json rep = json::parse(f);
        // rebuild the level geometry deterministically from the report
        const std::string alpha_spec = rep.at("config").at("alpha").get<std::string>();
        auto alpha = wd::parse_alpha(alpha_spec);
        wd::SequenceSource rebuild_src;
        rebuild_src.alpha = &alpha;
        wd::ConstructionState st;
        st.n = alpha.dim();
        st.C = rep.at("config").at("C").get<double>();
        st.eps = rep.at("report").at("eps").get<double>();
        for (const auto& l : rep.at("report").at("levels")) {
          auto lv = wd::build_level(rebuild_src, l.at("q_nu").get<u64>(), st.C,
                                    l.at("psi_nu").get<double>());
          lv.nu = st.levels.size() + 1;
          st.measures.push_back(lv.measure);
          st.levels.push_back(std::move(lv));
        }
        const auto hits = wd::level_hit_statistics(st, targets);
        artifact["level_hits"] = wd::io::level_hits_json(hits);
        if (hits.center_bound_violations) {
          emit(artifact, lim_out, wd::io::csv_records(series), lim_csv);
          return 1;
        }
      }
      emit(artifact, lim_out, wd::io::csv_records(series), lim_csv);
      return 0;
    }
  } catch (const wd::ConstructionStalledError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
