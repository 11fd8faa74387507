#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edcs/graph.hpp"

namespace edcs {

struct BMatching {
  std::vector<EdgeId> members;  // ascending ids
  Weight weight = 0;
};

/// True when every vertex is covered by at most b_v members and `weight` is their sum.
bool is_b_matching(const MultiGraph& g, const Capacities& b, const BMatching& m);

inline constexpr std::uint64_t kDefaultOracleBudget = 2'000'000;

/// Branch-and-bound over edge inclusion in id order; deterministic.
/// Throws OracleBudgetExceeded after `budget` search nodes.
BMatching max_weight_b_matching_bnb(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                                    std::uint64_t budget = kDefaultOracleBudget);

/// Exact solver for bipartite edge sets via min-cost flow. Throws PreconditionError
/// when `subset` is not bipartite.
BMatching max_weight_b_matching_flow(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset);

/// Maximum-weight b-matching: min-cost flow when `subset` is bipartite, branch-and-bound otherwise.
BMatching max_weight_b_matching_exact(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                                      std::uint64_t budget = kDefaultOracleBudget);
BMatching max_weight_b_matching_exact(const MultiGraph& g, const Capacities& b,
                                      std::uint64_t budget = kDefaultOracleBudget);

/// Greedy by descending weight, ties by id.
BMatching max_weight_b_matching_greedy(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset);
BMatching max_weight_b_matching_greedy(const MultiGraph& g, const Capacities& b);

/// Upper bound on the maximum b-matching weight of `subset`: half the optimum of the
/// bipartite double cover (the fractional b-matching relaxation).
Weight double_cover_bound(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset);

// ---------------------------------------------------------------------------
// Duality oracle

struct WVertexCover {
  std::vector<Weight> alpha;

  Weight weight() const;
  /// True when w(u,v) ≤ α_u + α_v for every edge of `subset`.
  bool covers(const MultiGraph& g, std::span<const EdgeId> subset) const;
};

/// Minimum-weight w-vertex-cover by exhaustive search (α_v ∈ {0..W}), pruned.
/// Throws PreconditionError if not bipartite, OracleBudgetExceeded past `budget` nodes.
WVertexCover min_w_vertex_cover_bipartite(const MultiGraph& g, std::span<const EdgeId> subset,
                                          std::uint64_t budget = 50'000'000);
WVertexCover min_w_vertex_cover_bipartite(const MultiGraph& g, std::uint64_t budget = 50'000'000);

// ---------------------------------------------------------------------------
// Edge distribution over split vertices

struct DistItem {
  EdgeId edge = kNoEdge;  // caller's handle
  Weight weight = 0;
  bool matched = false;   // member of the reference b-matching
  bool in_h = false;      // member of the sparsifier
};

/// Edges between the split vertex and one neighbour: matched items first, then
/// non-increasing weight.
struct NeighborGroup {
  Vertex neighbor = 0;
  std::vector<DistItem> items;
};

/// buckets[i] lists the items (copied) placed on copy i.
using Buckets = std::vector<std::vector<DistItem>>;

/// Greedy two-pass placement over buckets ordered by weight: matched items go to the
/// lightest buckets not yet holding a matched item, the rest to the lightest remaining
/// ones. Groups are processed in the given order; bucket ties go to the lower index.
/// Throws PreconditionError when a group is larger than b_v, is not ordered, or the
/// matched items exceed b_v in total.
Buckets distribute_edges(std::span<const NeighborGroup> groups, std::int64_t b_v);

struct DistributionCheck {
  bool one_matched_per_bucket = true;
  bool one_edge_per_neighbor = true;
  bool weight_window = true;  // every bucket within [wdeg_H/b − 2W, wdeg_H/b + 3W]
  Weight max_spread = 0;      // heaviest minus lightest bucket

  bool ok() const { return one_matched_per_bucket && one_edge_per_neighbor && weight_window; }
};

/// Evaluates the three distribution properties for a result of `distribute_edges`.
DistributionCheck check_distribution(std::span<const NeighborGroup> groups, const Buckets& buckets,
                                     std::int64_t b_v, Weight max_weight);

struct VertexSplit {
  MultiGraph graph;                 // G′: one vertex per capacity unit, edges of H ∪ M
  std::vector<EdgeId> h_edges;      // ids in `graph` coming from H
  std::vector<EdgeId> m_edges;      // ids in `graph` coming from M
  std::vector<Vertex> vertex_origin;  // split vertex → original vertex
  std::vector<EdgeId> edge_origin;    // split edge id → original edge id
  std::vector<Vertex> first_copy;     // original vertex → index of its first copy
};

/// Builds G′ and H′ by distributing δ(v) ∩ (H ∪ M) over b_v copies of each vertex.
/// M must use, for every vertex pair, the heaviest edges of H ∪ M between that pair.
VertexSplit vertex_split(const MultiGraph& g, const Capacities& b, const Subgraph& h, const BMatching& m);

}  // namespace edcs
