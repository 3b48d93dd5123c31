#pragma once

// JSON/CSV artifact writers. Every artifact embeds the run configuration and
// the artifact version; doubles are serialized shortest-round-trip, so
// identical runs produce byte-identical files.

#include <string>

#include <json.hpp>

#include "welldist/construction.hpp"
#include "welldist/dispersion.hpp"
#include "welldist/irrationality.hpp"
#include "welldist/verifier.hpp"

namespace welldist::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

json envelope(json config);  // {artifact_version, config}

json anchor_json(const CandidateAnchor& a);
json dispersion_json(const DispersionResult& d, const CoveringRadius* rho);
json certificate_json(const WitnessCertificate& w);
json profile_json(const IrrationalityProfile& p, const DirichletReport& d,
                  const SingularityProfile& s);
json construction_json(const ConstructionState& st);
json record_series_json(const std::vector<RecordSeries>& series);
json level_hits_json(const LevelHitStats& stats);

std::string csv_profile(const IrrationalityProfile& p);
std::string csv_dispersion(const std::vector<DispersionResult>& rows,
                           const std::vector<CoveringRadius>& rhos);
std::string csv_schmidt(const ConstructionState& st);
std::string csv_records(const std::vector<RecordSeries>& series);

std::string fmt_double(double v);  // shortest round-trip
void write_file(const std::string& path, const std::string& content);

}  // namespace welldist::io
