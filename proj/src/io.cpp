#include "welldist/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace welldist::io {

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("fmt_double failed");
  return std::string(buf, p);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

json envelope(json config) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["config"] = std::move(config);
  return j;
}

json anchor_json(const CandidateAnchor& a) {
  json j;
  json coords = json::array(), open = json::array();
  for (size_t i = 0; i < a.coords.size(); ++i) {
    coords.push_back(raw_to_double(a.coords[i]));
    open.push_back(static_cast<bool>(a.open[i]));
  }
  j["coords"] = std::move(coords);
  j["open"] = std::move(open);
  return j;
}

json dispersion_json(const DispersionResult& d, const CoveringRadius* rho) {
  json j;
  j["q"] = d.q;
  j["s_star"] = d.s_star;
  j["C_of_q"] = d.C_of_q;
  if (rho) {
    j["rho_lower"] = rho->lower;
    j["rho_upper"] = rho->upper;
    j["rho_exact"] = rho->exact;
  }
  j["witness_anchor"] = anchor_json(d.witness_anchor);
  return j;
}

json certificate_json(const WitnessCertificate& w) {
  json j;
  j["q"] = w.q;
  j["C"] = w.C;
  j["s_star"] = w.s_star;
  j["rho_lower"] = w.rho_lower;
  j["rho_upper"] = w.rho_upper;
  j["rho_exact"] = w.rho_exact;
  j["delta"] = w.delta;
  return j;
}

json profile_json(const IrrationalityProfile& p, const DirichletReport& d,
                  const SingularityProfile& s) {
  json j;
  j["alpha"] = p.alpha.provenance;
  j["n"] = p.alpha.dim();
  j["T"] = p.T;
  json records = json::array();
  for (const auto& r : p.records) {
    json rec;
    rec["q"] = r.q;
    rec["psi"] = r.psi_value;
    rec["t_end"] = r.t_end;
    rec["normalized"] = r.normalized;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  j["limsup_estimate"] = p.limsup_estimate;
  j["dirichlet"] = {{"pass", d.pass}, {"max_normalized", d.max_normalized}, {"argmax_t", d.argmax_t}};
  json cls;
  cls["classification"] = s.classification;
  cls["theta"] = s.theta;
  cls["heuristic"] = s.heuristic;  // finite-T diagnostic, not a limit claim
  j["singularity"] = std::move(cls);
  return j;
}

json construction_json(const ConstructionState& st) {
  json j;
  j["n"] = st.n;
  j["C"] = st.C;
  j["eps"] = st.eps;
  j["schedule"] = {{"kind", st.schedule.kind}, {"values", st.schedule.values}};
  json levels = json::array();
  for (const auto& c : st.checks) {
    json l;
    l["nu"] = c.nu;
    l["q_nu"] = c.q;
    l["q_prime"] = c.q_prime;
    l["psi_nu"] = c.psi;
    l["measure"] = c.measure;
    l["c_coeff"] = c.c_coeff;
    l["overlap_worst_ratio"] = c.overlap_worst_ratio;
    if (c.min_pairwise_slack)
      l["min_pairwise_slack"] = *c.min_pairwise_slack;
    else
      l["min_pairwise_slack"] = nullptr;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["measure_sum"] = st.measure_sum;
  j["schmidt_bound_history"] = st.schmidt_history;
  j["all_checks_passed"] = st.all_checks_passed;
  if (!st.failure_note.empty()) j["failure_note"] = st.failure_note;
  return j;
}

json record_series_json(const std::vector<RecordSeries>& series) {
  json arr = json::array();
  for (const auto& s : series) {
    json j;
    j["eta_id"] = s.eta_id;
    json eta = json::array();
    for (u64 c : s.eta_raw) eta.push_back(raw_to_double(c));
    j["eta"] = std::move(eta);
    json cps = json::array();
    for (const auto& cp : s.checkpoints) cps.push_back(json::array({cp.K, cp.record}));
    j["checkpoints"] = std::move(cps);
    j["best_k"] = s.best_k;
    j["final_record"] = s.final_record;
    arr.push_back(std::move(j));
  }
  return arr;
}

json level_hits_json(const LevelHitStats& stats) {
  json j;
  json per_level = json::array();
  for (size_t v = 0; v < stats.hit_counts.size(); ++v) {
    json l;
    l["hits"] = stats.hit_counts[v];
    l["fraction"] = stats.hit_fraction[v];
    l["expected_measure"] = stats.expected[v];
    l["binom_sigma"] = stats.binom_sigma[v];
    per_level.push_back(std::move(l));
  }
  j["per_level"] = std::move(per_level);
  json multiplicities = json::array();
  for (const auto& hits : stats.levels_hit) multiplicities.push_back(hits.size());
  j["per_eta_multiplicity"] = std::move(multiplicities);
  j["center_bound_checked"] = stats.center_bound_checked;
  j["center_bound_violations"] = stats.center_bound_violations;
  return j;
}

std::string csv_profile(const IrrationalityProfile& p) {
  std::string out = "q,psi,t_end,normalized\n";
  for (const auto& r : p.records) {
    out += std::to_string(r.q) + "," + fmt_double(r.psi_value) + "," + std::to_string(r.t_end) +
           "," + fmt_double(r.normalized) + "\n";
  }
  return out;
}

std::string csv_dispersion(const std::vector<DispersionResult>& rows,
                           const std::vector<CoveringRadius>& rhos) {
  std::string out = "q,s_star,C_of_q,rho_lower,rho_upper\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(rows[i].q) + "," + fmt_double(rows[i].s_star) + "," +
           fmt_double(rows[i].C_of_q);
    if (i < rhos.size())
      out += "," + fmt_double(rhos[i].lower) + "," + fmt_double(rhos[i].upper);
    else
      out += ",,";
    out += "\n";
  }
  return out;
}

std::string csv_schmidt(const ConstructionState& st) {
  std::string out = "t,schmidt_bound\n";
  for (size_t t = 0; t < st.schmidt_history.size(); ++t)
    out += std::to_string(t + 1) + "," + fmt_double(st.schmidt_history[t]) + "\n";
  return out;
}

std::string csv_records(const std::vector<RecordSeries>& series) {
  std::string out = "eta_id,K,record\n";
  for (const auto& s : series)
    for (const auto& cp : s.checkpoints)
      out += std::to_string(s.eta_id) + "," + std::to_string(cp.K) + "," + fmt_double(cp.record) +
             "\n";
  return out;
}

}  // namespace welldist::io
