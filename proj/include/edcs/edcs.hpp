#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "edcs/graph.hpp"

namespace edcs {

using Rational = boost::multiprecision::cpp_rational;

struct EdcsParams {
  Weight max_weight = 1;   // W
  Fraction epsilon{};      // 0 when not derived from epsilon
  Fraction lambda{};       // epsilon / (100 W) in theorem mode
  std::int64_t beta = 3;
  std::int64_t beta_minus = 1;

  /// Throws PreconditionError unless 0 ≤ beta_minus and beta ≥ beta_minus + 2.
  void check() const;
};

enum class ParamMode { theorem, practical };

/// theorem: smallest (β, β⁻) meeting both parameter inequalities of the combination
/// bound with λ = ε/(100W) (natural log; search capped at β = 2³²).
/// practical: (practical_beta, practical_beta − 2).
EdcsParams parameters_for(Fraction epsilon, Weight max_weight, ParamMode mode,
                          std::optional<std::int64_t> practical_beta = std::nullopt);

/// Checks the two theorem-mode inequalities numerically.
bool satisfies_theorem_conditions(const EdcsParams& p);

/// Sign of wdeg_H(u)/b_u + wdeg_H(v)/b_v − factor·w(e), evaluated exactly.
int compare_edge_degree(const Subgraph& h, const Capacities& b, const WeightedEdge& e, std::int64_t factor);

struct ViolationReport {
  std::vector<EdgeId> upper_violations;  // members with degree sum > β·w
  std::vector<EdgeId> lower_violations;  // non-members with degree sum < β⁻·w

  bool clean() const { return upper_violations.empty() && lower_violations.empty(); }
};

/// Lists every edge of g breaking either EDCS property for h. OpenMP over edges.
ViolationReport validate(const MultiGraph& g, const Capacities& b, const Subgraph& h, const EdcsParams& p);
/// Single-threaded reference for `validate`.
ViolationReport validate_serial(const MultiGraph& g, const Capacities& b, const Subgraph& h,
                                const EdcsParams& p);

/// Φ(H) = (2β−2)·Σ_{e∈H} w(e)² − Σ_v wdeg_H(v)²/b_v.
Rational potential(const Subgraph& h, const Capacities& b, const EdcsParams& p);

/// Exact increase of Φ caused by inserting (sign=+1) or erasing (sign=−1) edge e,
/// given the degrees of h before the change, scaled by b_u·b_v so it is an integer.
struct PotentialStep {
  __int128 scaled_delta = 0;
  std::int64_t scale = 1;  // b_u · b_v

  Rational value() const;
  /// True when the increase is at least num/den.
  bool at_least(std::int64_t num, std::int64_t den) const {
    return scaled_delta * den >= static_cast<__int128>(num) * scale;
  }
};
PotentialStep potential_step(const Subgraph& h, const Capacities& b, const EdcsParams& p, const WeightedEdge& e,
                             int sign);

enum class StepKind : std::uint8_t { remove, insert };

struct BuildStep {
  StepKind kind;
  EdgeId edge;
  PotentialStep delta;
};

struct BuildResult {
  Subgraph h;
  std::size_t steps = 0;
  std::vector<BuildStep> trace;    // filled when requested
  bool potential_monotone = true;  // every step raised Φ by at least min_scaled_increase
  std::optional<Rational> min_step;  // smallest observed increase
  bool degree_cap_held = true;     // deg_H(v) ≤ β·b_v + 1 after every step
};

struct BuildOptions {
  bool record_trace = false;
};

/// Local search for a (β,β⁻)-w-b-EDCS: Property (i) repairs (removals) take priority over
/// Property (ii) repairs (insertions); each queue is FIFO with batches pushed in id order.
/// Requires at most min(b_u,b_v) parallel edges per pair.
BuildResult build_wb_edcs(const MultiGraph& g, const Capacities& b, const EdcsParams& p,
                          BuildOptions options = {});

/// Simple-graph specialisation (all b_v = 1). Requires g simple.
BuildResult build_w_edcs(const MultiGraph& g, const EdcsParams& p, BuildOptions options = {});

/// Lower bound on a local-search step's Φ increase, scaled by b_u·b_v:
/// 2·b_u·b_v + 2 − b_u − b_v (that is 1 + ((b_u−1)(b_v−1)+1)/(b_u·b_v); 2 when b ≡ 1).
std::int64_t min_scaled_increase(std::int64_t bu, std::int64_t bv);

/// Step bound from the potential argument: ⌊Φ_max / (1 + 1/b_max)⌋ with
/// Φ_max = 2β W²·2β·matching_size.
std::uint64_t wb_step_bound(const EdcsParams& p, std::uint64_t matching_size, std::int64_t max_capacity);
/// Φ_max = 2β²W²·n (simple case, increase 2).
std::uint64_t w_step_bound(const EdcsParams& p, std::size_t n);

}  // namespace edcs
