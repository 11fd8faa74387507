#include "edcs/report.hpp"

#include <sstream>

namespace edcs {

using nlohmann::json;

namespace {

std::string fraction_text(Fraction f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

}  // namespace

json to_json(const EdcsParams& p) {
  return {{"W", p.max_weight},
          {"epsilon", fraction_text(p.epsilon)},
          {"lambda", fraction_text(p.lambda)},
          {"beta", p.beta},
          {"beta_minus", p.beta_minus}};
}

json to_json(const ViolationReport& r) {
  return {{"clean", r.clean()}, {"upper_violations", r.upper_violations}, {"lower_violations", r.lower_violations}};
}

json to_json(const MultiGraph& g, const BMatching& m) {
  json edges = json::array();
  for (EdgeId id : m.members) {
    const auto& e = g.edge(id);
    edges.push_back({e.u, e.v, e.w, id});
  }
  return {{"weight", m.weight}, {"edges", std::move(edges)}};
}

json to_json(const StreamRunStats& s) {
  return {{"m", s.m},
          {"phase1_edges_consumed", s.phase1_edges_consumed},
          {"phase1_budget", s.phase1_budget},
          {"final_guess_i", s.final_guess_i},
          {"epoch_count", s.epoch_count},
          {"process_stopped", s.process_stopped},
          {"underfull_collected", s.underfull_collected},
          {"late_stored", s.late_stored},
          {"h_size", s.h_size},
          {"peak_stored_edges", s.peak_stored_edges},
          {"small_output_cap", s.small_output_cap},
          {"small_output_overflowed", s.small_output_overflowed},
          {"insertions", s.insertions},
          {"removals", s.removals},
          {"replacements", s.replacements},
          {"replacement_potential_ok", s.replacement_potential_ok},
          {"fallback_used", to_string(s.fallback_used)},
          {"extraction", to_string(s.extraction)},
          {"result_weight", s.result_weight},
          {"alpha_log_rounding", s.alpha_log_rounding},
          {"rng", s.rng}};
}

json to_json(const MultiGraph& g, const TrialReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json j = {{"seed", t.seed}, {"stats", to_json(t.stats)}, {"matching", to_json(g, t.matching)}};
    j["ratio"] = t.ratio ? json(*t.ratio) : json(nullptr);
    j["below_bound"] = t.below_bound;
    if (!t.error.empty()) j["error"] = t.error;
    trials.push_back(std::move(j));
  }
  const auto& c = r.config;
  json out = {{"variant", static_cast<int>(c.variant)},
              {"params", to_json(c.params)},
              {"epsilon", fraction_text(c.epsilon)},
              {"order", c.as_is ? "as-is" : "seeded"},
              {"oracle_budget", c.options.oracle_budget},
              {"bound_ratio", r.bound_ratio},
              {"failures", r.failures},
              {"peak_memory", r.peak_memory},
              {"trials", std::move(trials)}};
  out["oracle_weight"] = r.oracle_weight ? json(*r.oracle_weight) : json(nullptr);
  if (!r.oracle_error.empty()) out["oracle_error"] = r.oracle_error;
  out["min_ratio"] = r.min_ratio ? json(*r.min_ratio) : json(nullptr);
  out["mean_ratio"] = r.mean_ratio ? json(*r.mean_ratio) : json(nullptr);
  return out;
}

std::string trials_csv(const TrialReport& r) {
  std::ostringstream out;
  out << "seed,ratio,peak_memory,phase1_edges,x_size,fallback,extraction\n";
  for (const auto& t : r.trials) {
    out << t.seed << ',';
    if (t.ratio) out << json(*t.ratio).dump();
    out << ',' << t.stats.peak_stored_edges << ',' << t.stats.phase1_edges_consumed << ','
        << t.stats.underfull_collected << ',' << to_string(t.stats.fallback_used) << ','
        << (t.error.empty() ? to_string(t.stats.extraction) : "error") << '\n';
  }
  return out.str();
}

}  // namespace edcs
