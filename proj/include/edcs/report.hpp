#pragma once

#include <json.hpp>
#include <string>

#include "edcs/edcs.hpp"
#include "edcs/matching.hpp"
#include "edcs/trials.hpp"

namespace edcs {

nlohmann::json to_json(const EdcsParams& p);
nlohmann::json to_json(const ViolationReport& r);
/// {"weight": w, "edges": [[u, v, w, id], ...]}
nlohmann::json to_json(const MultiGraph& g, const BMatching& m);
nlohmann::json to_json(const StreamRunStats& s);
nlohmann::json to_json(const MultiGraph& g, const TrialReport& r);

/// Header `seed,ratio,peak_memory,phase1_edges,x_size,fallback,extraction`; ratio is
/// empty when the oracle did not finish.
std::string trials_csv(const TrialReport& r);

}  // namespace edcs
