#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edcs/edcs.hpp"
#include "edcs/matching.hpp"

namespace edcs {

/// A single pass over the edges of `source` in the order given by `order`.
class EdgeStream {
 public:
  EdgeStream(const MultiGraph& source, std::vector<EdgeId> order);

  const MultiGraph& source() const { return *source_; }
  std::size_t length() const { return order_.size(); }  // m, known upfront
  std::size_t position() const { return cursor_; }
  bool done() const { return cursor_ == order_.size(); }
  const WeightedEdge& next() { return source_->edge(order_.at(cursor_++)); }
  const std::vector<EdgeId>& order() const { return order_; }
  void rewind() { cursor_ = 0; }

 private:
  const MultiGraph* source_;
  std::vector<EdgeId> order_;
  std::size_t cursor_ = 0;
};

/// Uniformly random order (Fisher-Yates driven by Rng).
EdgeStream make_stream(const MultiGraph& g, std::uint64_t seed);
/// File order; the guarantees assume a random order, so this is for experiments only.
EdgeStream make_stream_as_is(const MultiGraph& g);

/// Degree test for a non-member: wdeg(u)/b_u + wdeg(v)/b_v < β⁻·w, exactly.
bool is_underfull(const Subgraph& h, const Capacities& b, const WeightedEdge& e, const EdcsParams& p);

enum class Fallback { none, small_output, alpha_zero };
enum class Extraction { exact, greedy };
enum class Variant { algorithm1 = 1, algorithm3 = 3 };

const char* to_string(Fallback f);
const char* to_string(Extraction e);

struct StreamRunStats {
  std::size_t m = 0;
  std::size_t phase1_edges_consumed = 0;
  std::size_t phase1_budget = 0;       // ⌈ε·m⌉
  std::int64_t final_guess_i = -1;     // level at which phase 1 ended
  std::size_t epoch_count = 0;
  bool process_stopped = false;        // an epoch without underfull edges ended phase 1
  std::size_t underfull_collected = 0; // |X|
  std::size_t late_stored = 0;         // edges kept by the alpha_zero path
  std::size_t h_size = 0;
  std::size_t peak_stored_edges = 0;
  std::size_t small_output_cap = 0;    // 0 when the auxiliary store is disabled
  bool small_output_overflowed = false;
  std::size_t insertions = 0;
  std::size_t removals = 0;
  std::size_t replacements = 0;
  bool replacement_potential_ok = true;  // every replacement raised Φ by ≥ 1
  bool bounded_degree_held = true;       // only evaluated with check_invariants
  Fallback fallback_used = Fallback::none;
  Extraction extraction = Extraction::exact;
  Weight result_weight = 0;
  std::string alpha_log_rounding = "floor(log2 m)+1";
  std::string rng = Rng::kAlgorithm;
};

struct StreamOptions {
  std::uint64_t oracle_budget = kDefaultOracleBudget;
  bool small_output = true;
  std::optional<std::uint64_t> small_output_cap;  // default ⌈2n·(3W²/(2ε²))·ln m⌉
  bool check_invariants = false;                  // re-check H after every mutation
  // fixed α for every level instead of the formula; lets tiny streams reach phase 1
  std::optional<std::uint64_t> interval_override;
};

struct StreamResult {
  Subgraph h;
  std::vector<EdgeId> x;         // arrival order
  std::vector<EdgeId> stored;    // E^late kept by alpha_zero, arrival order
  BMatching matching;
  StreamRunStats stats;
};

/// α_i for level i, or 0 when it underflows.
std::uint64_t interval_size(std::size_t m, Fraction epsilon, const EdcsParams& p, std::size_t level);
/// Number of guessing levels, ⌊log₂ m⌋ + 1 (0 for m = 0).
std::size_t guess_levels(std::size_t m);
/// ⌈2n·(3W²/(2ε²))·ln m⌉.
std::uint64_t default_small_output_cap(std::size_t n, Weight max_weight, Fraction epsilon, std::size_t m);

/// Two-phase random-order algorithm with both border-case fallbacks.
/// Requires multiplicity ≤ min(b_u, b_v) in the source graph.
StreamResult run_algorithm1(EdgeStream& stream, const Capacities& b, const EdcsParams& p, Fraction epsilon,
                            const StreamOptions& options = {});

/// Variant tolerating parallel edges: full pairs only accept strictly heavier edges, which
/// replace the lightest one.
StreamResult run_algorithm3(EdgeStream& stream, const Capacities& b, const EdcsParams& p, Fraction epsilon,
                            const StreamOptions& options = {});

StreamResult run_stream(Variant variant, EdgeStream& stream, const Capacities& b, const EdcsParams& p,
                        Fraction epsilon, const StreamOptions& options = {});

/// Max-weight b-matching of `subset`: exact when the oracle fits the budget, greedy otherwise.
BMatching extract_matching(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                           std::uint64_t budget, Extraction& used);

}  // namespace edcs
