#include "edcs/trials.hpp"

#include <omp.h>

#include <algorithm>

namespace edcs {

namespace {

TrialReport prepare(const MultiGraph& g, const Capacities& b, const std::vector<std::uint64_t>& seeds,
                    const TrialConfig& config) {
  TrialReport report;
  report.config = config;
  const Fraction slack = config.slack.value_or(config.epsilon);
  const double w = static_cast<double>(config.params.max_weight);
  report.bound_ratio = 1.0 / (2.0 - 1.0 / (2.0 * w) + slack.value());
  if (config.with_oracle) {
    try {
      report.oracle_weight = max_weight_b_matching_exact(g, b, config.options.oracle_budget).weight;
    } catch (const OracleBudgetExceeded& e) {
      report.oracle_error = e.what();
    }
  }
  report.trials.resize(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) report.trials[i].seed = seeds[i];
  return report;
}

void run_one(const MultiGraph& g, const Capacities& b, const TrialConfig& config,
             std::optional<Weight> oracle, double bound, TrialRecord& rec) {
  try {
    EdgeStream stream = config.as_is ? make_stream_as_is(g) : make_stream(g, rec.seed);
    auto result = run_stream(config.variant, stream, b, config.params, config.epsilon, config.options);
    rec.stats = result.stats;
    rec.matching = std::move(result.matching);
    if (oracle) {
      rec.ratio = *oracle == 0 ? 1.0 : static_cast<double>(rec.matching.weight) / static_cast<double>(*oracle);
      rec.below_bound = *rec.ratio < bound;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
}

void summarize(TrialReport& report) {
  double sum = 0;
  std::size_t count = 0;
  for (const auto& t : report.trials) {
    report.peak_memory.push_back(t.stats.peak_stored_edges);
    if (t.below_bound || !t.error.empty()) ++report.failures;
    if (!t.ratio) continue;
    sum += *t.ratio;
    ++count;
    report.min_ratio = std::min(report.min_ratio.value_or(*t.ratio), *t.ratio);
  }
  if (count) report.mean_ratio = sum / static_cast<double>(count);
}

}  // namespace

TrialReport run_trials(const MultiGraph& g, const Capacities& b, const std::vector<std::uint64_t>& seeds,
                       const TrialConfig& config, int jobs) {
  TrialReport report = prepare(g, b, seeds, config);
  const auto n = static_cast<std::int64_t>(seeds.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i)
    run_one(g, b, config, report.oracle_weight, report.bound_ratio, report.trials[static_cast<std::size_t>(i)]);
  summarize(report);
  return report;
}

TrialReport run_trials_serial(const MultiGraph& g, const Capacities& b, const std::vector<std::uint64_t>& seeds,
                              const TrialConfig& config) {
  TrialReport report = prepare(g, b, seeds, config);
  for (auto& rec : report.trials) run_one(g, b, config, report.oracle_weight, report.bound_ratio, rec);
  summarize(report);
  return report;
}

}  // namespace edcs
