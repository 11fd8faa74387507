#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edcs/stream.hpp"

namespace edcs {

struct TrialConfig {
  Variant variant = Variant::algorithm1;
  EdcsParams params;
  Fraction epsilon{1, 10};
  StreamOptions options;
  bool as_is = false;          // file order instead of a seeded permutation
  bool with_oracle = true;
  // a trial fails when ratio < 1 / (2 − 1/(2W) + slack); slack defaults to epsilon
  std::optional<Fraction> slack;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  StreamRunStats stats;
  BMatching matching;
  std::optional<double> ratio;  // result / oracle, only when the oracle succeeded
  bool below_bound = false;
  std::string error;            // non-empty when the run threw
};

struct TrialReport {
  TrialConfig config;
  std::optional<Weight> oracle_weight;
  std::string oracle_error;
  std::vector<TrialRecord> trials;  // in seed order
  std::optional<double> min_ratio;
  std::optional<double> mean_ratio;
  double bound_ratio = 0;           // 1 / (2 − 1/(2W) + slack)
  std::size_t failures = 0;         // trials with below_bound or error
  std::vector<std::size_t> peak_memory;
};

/// One stream run per seed, spread over `jobs` OpenMP threads (0 = runtime default).
/// The graph is shared read-only; every run owns its state.
TrialReport run_trials(const MultiGraph& g, const Capacities& b, const std::vector<std::uint64_t>& seeds,
                       const TrialConfig& config, int jobs = 0);
/// Sequential reference for `run_trials`; produces the same report.
TrialReport run_trials_serial(const MultiGraph& g, const Capacities& b, const std::vector<std::uint64_t>& seeds,
                              const TrialConfig& config);

}  // namespace edcs
