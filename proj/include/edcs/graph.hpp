#pragma once

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edcs/common.hpp"

namespace edcs {

struct WeightedEdge {
  EdgeId id = kNoEdge;
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 1;

  Vertex other(Vertex x) const { return x == u ? v : u; }
};

/// Endpoints and weight of an edge before ids are assigned.
struct EdgeSpec {
  Vertex u;
  Vertex v;
  Weight w;
};

/// Immutable weighted multigraph. Edge ids are positions in input order.
class MultiGraph {
 public:
  MultiGraph() = default;
  /// Throws InputError on self-loops, out-of-range endpoints, or weights outside [1, max_weight].
  MultiGraph(std::size_t n, Weight max_weight, std::span<const EdgeSpec> edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  Weight max_weight() const { return max_weight_; }

  const WeightedEdge& edge(EdgeId id) const { return edges_.at(id); }
  std::span<const WeightedEdge> edges() const { return edges_; }
  std::span<const EdgeId> incident(Vertex v) const { return adjacency_.at(v); }

  /// True when no two edges join the same vertex pair.
  bool is_simple() const;

  /// Two-colouring of the edges in `subset`; nullopt when an odd cycle exists.
  /// Side 0/1 per vertex (isolated vertices get side 0).
  std::optional<std::vector<std::uint8_t>> bipartition(std::span<const EdgeId> subset) const;
  std::optional<std::vector<std::uint8_t>> bipartition() const;

  std::vector<EdgeId> all_edge_ids() const;

 private:
  Weight max_weight_ = 1;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
};

/// Per-vertex b-matching capacities (each ≥ 1).
class Capacities {
 public:
  Capacities() = default;
  explicit Capacities(std::vector<std::int64_t> b);
  static Capacities uniform(std::size_t n, std::int64_t value = 1);

  std::int64_t operator[](Vertex v) const { return b_[v]; }
  std::int64_t at(Vertex v) const { return b_.at(v); }
  std::size_t size() const { return b_.size(); }
  std::span<const std::int64_t> values() const { return b_; }

  std::int64_t pair_limit(Vertex u, Vertex v) const { return std::min(b_[u], b_[v]); }

 private:
  std::vector<std::int64_t> b_;
};

/// True when every vertex pair carries at most min(b_u, b_v) parallel edges.
bool multiplicity_within_capacity(const MultiGraph& g, const Capacities& b);

/// Edge subset of a parent graph with cached degree and weighted degree per vertex.
/// Single writer; the parent must outlive the subgraph.
class Subgraph {
 public:
  explicit Subgraph(const MultiGraph& parent);
  Subgraph(const MultiGraph& parent, std::span<const EdgeId> members);

  const MultiGraph& parent() const { return *parent_; }

  bool contains(EdgeId id) const { return member_[id] != 0; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void insert(EdgeId id);
  void erase(EdgeId id);
  void clear();

  Weight weighted_degree(Vertex v) const;
  std::size_t degree(Vertex v) const;
  /// Member edges incident to v, in no particular order.
  std::span<const EdgeId> incident(Vertex v) const { return incident_.at(v); }

  /// Member ids in ascending order.
  std::vector<EdgeId> members() const;
  Weight total_weight() const;

  /// Recounts degrees from scratch and compares against the caches.
  bool cache_consistent() const;

 private:
  void detach(Vertex x, EdgeId id);

  const MultiGraph* parent_;
  std::vector<std::uint8_t> member_;
  std::vector<Weight> wdeg_;
  std::vector<std::vector<EdgeId>> incident_;
  // slot of edge id inside incident_[u] / incident_[v]
  std::vector<std::uint32_t> slot_u_;
  std::vector<std::uint32_t> slot_v_;
  std::size_t size_ = 0;
};

/// Weighted degree of v in h. Throws std::out_of_range for v ≥ n.
Weight weighted_degree(const Subgraph& h, Vertex v);

/// For every vertex pair keeps the min(b_u, b_v, multiplicity) heaviest edges;
/// ties go to the smaller edge id.
Subgraph relevant_subgraph(const MultiGraph& g, const Capacities& b);

/// Graph plus capacities as stored in the line-oriented text format.
struct GraphFile {
  MultiGraph graph;
  Capacities capacities;
};

/// Reads `g <n> <m> <W>`, `b <v> <b_v>`, `e <u> <v> <w>` lines; `#` starts a comment.
/// Throws InputError carrying the offending line number.
GraphFile read_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);

/// Writes the graph (or only `subset`, renumbered in order) in the text format.
/// Capacity lines are emitted only for b_v ≠ 1.
void write_graph(std::ostream& out, const MultiGraph& g, const Capacities& b,
                 std::optional<std::span<const EdgeId>> subset = std::nullopt);

/// Graph built from arbitrary vertex labels; `labels[i]` is the label of vertex i.
struct LabeledGraph {
  MultiGraph graph;
  std::vector<std::string> labels;
};

/// Ingests `<label> <label> <weight>` lines, assigning dense indices in first-seen order.
LabeledGraph ingest_labeled_edges(std::istream& in, Weight max_weight);

/// Maps each edge of `sub` to an unused edge of `g` with the same endpoints and weight
/// (smallest id first). Throws InputError when `sub` is not contained in `g`.
std::vector<EdgeId> embed_subgraph(const MultiGraph& g, const MultiGraph& sub);

}  // namespace edcs
