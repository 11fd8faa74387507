#include "edcs/matching.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

namespace edcs {

bool is_b_matching(const MultiGraph& g, const Capacities& b, const BMatching& m) {
  std::vector<std::int64_t> load(g.vertex_count(), 0);
  Weight total = 0;
  std::vector<std::uint8_t> seen(g.edge_count(), 0);
  for (EdgeId id : m.members) {
    if (id >= g.edge_count() || seen[id]) return false;
    seen[id] = 1;
    const auto& e = g.edge(id);
    if (++load[e.u] > b[e.u] || ++load[e.v] > b[e.v]) return false;
    total += e.w;
  }
  return total == m.weight;
}

namespace {

BMatching finish(const MultiGraph& g, std::vector<EdgeId> ids) {
  std::sort(ids.begin(), ids.end());
  BMatching out;
  for (EdgeId id : ids) out.weight += g.edge(id).w;
  out.members = std::move(ids);
  return out;
}

// Max-weight bipartite b-matching by successive shortest paths on costs −w.
// Arcs carry a caller tag; returns the tags of saturated middle arcs.
class BipartiteFlow {
 public:
  BipartiteFlow(std::size_t left, std::size_t right) : left_(left), right_(right), head_(left + right + 2, -1) {}

  void set_left_capacity(std::size_t i, std::int64_t cap) { add_arc(source(), i, cap, 0, kNoTag); }
  void set_right_capacity(std::size_t j, std::int64_t cap) { add_arc(left_ + j, sink(), cap, 0, kNoTag); }
  void add_pair(std::size_t i, std::size_t j, Weight w, std::size_t tag) { add_arc(i, left_ + j, 1, -w, tag); }

  /// Runs to optimality; returns total weight.
  Weight solve() {
    const std::size_t nodes = head_.size();
    Weight total = 0;
    std::vector<std::int64_t> dist(nodes);
    std::vector<int> prev_arc(nodes);
    std::vector<std::uint8_t> queued(nodes);
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    while (true) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(prev_arc.begin(), prev_arc.end(), -1);
      std::deque<std::size_t> queue{source()};
      dist[source()] = 0;
      queued.assign(nodes, 0);
      queued[source()] = 1;
      while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        queued[x] = 0;
        for (int a = head_[x]; a != -1; a = arcs_[a].next) {
          const Arc& arc = arcs_[a];
          if (arc.cap > 0 && dist[x] + arc.cost < dist[arc.to]) {
            dist[arc.to] = dist[x] + arc.cost;
            prev_arc[arc.to] = a;
            if (!queued[arc.to]) {
              queued[arc.to] = 1;
              queue.push_back(arc.to);
            }
          }
        }
      }
      if (dist[sink()] >= 0) break;  // unreachable or no longer profitable
      for (std::size_t x = sink(); x != source(); x = arcs_[prev_arc[x] ^ 1].to) {
        arcs_[prev_arc[x]].cap -= 1;
        arcs_[prev_arc[x] ^ 1].cap += 1;
      }
      total -= dist[sink()];
    }
    return total;
  }

  std::vector<std::size_t> chosen_tags() const {
    std::vector<std::size_t> tags;
    for (std::size_t a = 0; a < arcs_.size(); a += 2)
      if (arcs_[a].tag != kNoTag && arcs_[a].cap == 0) tags.push_back(arcs_[a].tag);
    return tags;
  }

 private:
  static constexpr std::size_t kNoTag = std::numeric_limits<std::size_t>::max();
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    std::int64_t cost;
    int next;
    std::size_t tag;
  };

  std::size_t source() const { return left_ + right_; }
  std::size_t sink() const { return left_ + right_ + 1; }

  void add_arc(std::size_t from, std::size_t to, std::int64_t cap, std::int64_t cost, std::size_t tag) {
    arcs_.push_back({to, cap, cost, head_[from], tag});
    head_[from] = static_cast<int>(arcs_.size() - 1);
    arcs_.push_back({from, 0, -cost, head_[to], kNoTag});
    head_[to] = static_cast<int>(arcs_.size() - 1);
  }

  std::size_t left_, right_;
  std::vector<int> head_;
  std::vector<Arc> arcs_;
};

}  // namespace

BMatching max_weight_b_matching_flow(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset) {
  auto sides = g.bipartition(subset);
  if (!sides) throw PreconditionError("edge set is not bipartite");
  const std::size_t n = g.vertex_count();
  BipartiteFlow flow(n, n);
  for (Vertex v = 0; v < n; ++v) {
    if ((*sides)[v] == 0)
      flow.set_left_capacity(v, b[v]);
    else
      flow.set_right_capacity(v, b[v]);
  }
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const auto& e = g.edge(subset[k]);
    const bool u_left = (*sides)[e.u] == 0;
    flow.add_pair(u_left ? e.u : e.v, u_left ? e.v : e.u, e.w, k);
  }
  flow.solve();
  std::vector<EdgeId> ids;
  for (auto k : flow.chosen_tags()) ids.push_back(subset[k]);
  return finish(g, std::move(ids));
}

Weight double_cover_bound(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset) {
  const std::size_t n = g.vertex_count();
  BipartiteFlow flow(n, n);
  for (Vertex v = 0; v < n; ++v) {
    flow.set_left_capacity(v, b[v]);
    flow.set_right_capacity(v, b[v]);
  }
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const auto& e = g.edge(subset[k]);
    flow.add_pair(e.u, e.v, e.w, 2 * k);
    flow.add_pair(e.v, e.u, e.w, 2 * k + 1);
  }
  return flow.solve() / 2;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset, std::uint64_t budget)
      : g_(g), budget_(budget), edges_(subset.begin(), subset.end()), residual_(g.vertex_count()) {
    std::sort(edges_.begin(), edges_.end());
    for (Vertex v = 0; v < g.vertex_count(); ++v) residual_[v] = b[v];
    caps_ = &b;
  }

  BMatching run() {
    auto seed = max_weight_b_matching_greedy(g_, *caps_, edges_);
    best_weight_ = seed.weight;
    best_ = seed.members;
    search(0, 0);
    return finish(g_, best_);
  }

 private:
  // Admissible bound on what edges_[from..] can still add.
  Weight bound(std::size_t from) {
    Weight plain = 0;
    std::map<Vertex, std::vector<Weight>> incident;
    for (std::size_t k = from; k < edges_.size(); ++k) {
      const auto& e = g_.edge(edges_[k]);
      if (residual_[e.u] == 0 || residual_[e.v] == 0) continue;
      plain += e.w;
      incident[e.u].push_back(e.w);
      incident[e.v].push_back(e.w);
    }
    Weight truncated = 0;  // twice the degree-truncated bound
    for (auto& [v, ws] : incident) {
      const auto take = std::min<std::size_t>(ws.size(), static_cast<std::size_t>(residual_[v]));
      std::partial_sort(ws.begin(), ws.begin() + take, ws.end(), std::greater<>());
      truncated += std::accumulate(ws.begin(), ws.begin() + take, Weight{0});
    }
    return std::min(plain, truncated / 2);
  }

  Weight cover_bound(std::size_t from) {
    std::vector<EdgeId> rest;
    for (std::size_t k = from; k < edges_.size(); ++k) {
      const auto& e = g_.edge(edges_[k]);
      if (residual_[e.u] > 0 && residual_[e.v] > 0) rest.push_back(edges_[k]);
    }
    return double_cover_bound(g_, Capacities(residual_with_floor()), rest);
  }

  std::vector<std::int64_t> residual_with_floor() const {
    std::vector<std::int64_t> r(residual_.begin(), residual_.end());
    for (auto& x : r) x = std::max<std::int64_t>(x, 1);  // zero-residual vertices carry no edges in `rest`
    return r;
  }

  void search(std::size_t k, Weight current) {
    if (++nodes_ > budget_) throw OracleBudgetExceeded();
    while (k < edges_.size()) {
      const auto& e = g_.edge(edges_[k]);
      if (residual_[e.u] > 0 && residual_[e.v] > 0) break;
      ++k;
    }
    if (current > best_weight_) {
      best_weight_ = current;
      best_ = chosen_;
    }
    if (k == edges_.size()) return;
    if (current + bound(k) <= best_weight_) return;
    if (edges_.size() - k >= 16 && current + cover_bound(k) <= best_weight_) return;

    const auto& e = g_.edge(edges_[k]);
    --residual_[e.u];
    --residual_[e.v];
    chosen_.push_back(e.id);
    search(k + 1, current + e.w);
    chosen_.pop_back();
    ++residual_[e.u];
    ++residual_[e.v];

    search(k + 1, current);
  }

  const MultiGraph& g_;
  const Capacities* caps_ = nullptr;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<EdgeId> edges_;
  std::vector<std::int64_t> residual_;
  std::vector<EdgeId> chosen_;
  std::vector<EdgeId> best_;
  Weight best_weight_ = 0;
};

}  // namespace

BMatching max_weight_b_matching_bnb(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                                    std::uint64_t budget) {
  return BranchAndBound(g, b, subset, budget).run();
}

BMatching max_weight_b_matching_exact(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                                      std::uint64_t budget) {
  if (g.bipartition(subset)) return max_weight_b_matching_flow(g, b, subset);
  return max_weight_b_matching_bnb(g, b, subset, budget);
}

BMatching max_weight_b_matching_exact(const MultiGraph& g, const Capacities& b, std::uint64_t budget) {
  return max_weight_b_matching_exact(g, b, g.all_edge_ids(), budget);
}

BMatching max_weight_b_matching_greedy(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset) {
  std::vector<EdgeId> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end(), [&](EdgeId x, EdgeId y) {
    const auto wx = g.edge(x).w, wy = g.edge(y).w;
    return wx != wy ? wx > wy : x < y;
  });
  std::vector<std::int64_t> load(g.vertex_count(), 0);
  std::vector<EdgeId> picked;
  for (EdgeId id : order) {
    const auto& e = g.edge(id);
    if (load[e.u] < b[e.u] && load[e.v] < b[e.v]) {
      ++load[e.u];
      ++load[e.v];
      picked.push_back(id);
    }
  }
  return finish(g, std::move(picked));
}

BMatching max_weight_b_matching_greedy(const MultiGraph& g, const Capacities& b) {
  return max_weight_b_matching_greedy(g, b, g.all_edge_ids());
}

// ---------------------------------------------------------------------------

Weight WVertexCover::weight() const { return std::accumulate(alpha.begin(), alpha.end(), Weight{0}); }

bool WVertexCover::covers(const MultiGraph& g, std::span<const EdgeId> subset) const {
  for (EdgeId id : subset) {
    const auto& e = g.edge(id);
    if (alpha.at(e.u) < 0 || alpha.at(e.v) < 0 || e.w > alpha[e.u] + alpha[e.v]) return false;
  }
  return true;
}

namespace {

// Enumerates α on one side; the other side's optimum given those values is
// α_t = max(0, max_s (w(s,t) − α_s)).
class CoverSearch {
 public:
  CoverSearch(const MultiGraph& g, std::span<const EdgeId> subset, const std::vector<std::uint8_t>& sides,
              std::uint64_t budget)
      : n_(g.vertex_count()), budget_(budget) {
    std::map<std::pair<Vertex, Vertex>, Weight> heaviest;
    std::size_t count[2] = {0, 0};
    for (Vertex v = 0; v < n_; ++v) ++count[sides[v]];
    const std::uint8_t enum_side = count[0] <= count[1] ? 0 : 1;
    for (EdgeId id : subset) {
      const auto& e = g.edge(id);
      const Vertex s = sides[e.u] == enum_side ? e.u : e.v;
      const Vertex t = e.other(s);
      auto& w = heaviest[{s, t}];
      w = std::max(w, e.w);
    }
    std::map<Vertex, std::size_t> index;
    for (auto& [key, w] : heaviest) {
      auto [it, fresh] = index.try_emplace(key.first, enum_.size());
      if (fresh) enum_.push_back({key.first, 0, {}});
      enum_[it->second].edges.push_back({key.second, w});
      enum_[it->second].max_w = std::max(enum_[it->second].max_w, w);
    }
    other_.assign(n_, 0);
    alpha_.assign(n_, 0);
    // incumbent: put everything on the enumerated side
    best_.assign(n_, 0);
    for (auto& s : enum_) best_[s.vertex] = s.max_w;
    best_weight_ = std::accumulate(best_.begin(), best_.end(), Weight{0});
  }

  WVertexCover run() {
    search(0, 0, 0);
    return {best_};
  }

 private:
  struct Side {
    Vertex vertex;
    Weight max_w;
    std::vector<std::pair<Vertex, Weight>> edges;
  };

  void search(std::size_t k, Weight enum_sum, Weight other_sum) {
    if (++nodes_ > budget_) throw OracleBudgetExceeded();
    if (enum_sum + other_sum >= best_weight_) return;
    if (k == enum_.size()) {
      best_weight_ = enum_sum + other_sum;
      best_.assign(n_, 0);
      for (auto& s : enum_) best_[s.vertex] = alpha_[s.vertex];
      for (Vertex t = 0; t < n_; ++t)
        if (other_[t] > 0) best_[t] = other_[t];
      return;
    }
    const Side& s = enum_[k];
    std::vector<Weight> saved;
    saved.reserve(s.edges.size());
    for (Weight a = 0; a <= s.max_w; ++a) {
      alpha_[s.vertex] = a;
      Weight added = 0;
      saved.clear();
      for (auto [t, w] : s.edges) {
        saved.push_back(other_[t]);
        if (w - a > other_[t]) {
          added += w - a - other_[t];
          other_[t] = w - a;
        }
      }
      search(k + 1, enum_sum + a, other_sum + added);
      for (std::size_t i = 0; i < s.edges.size(); ++i) other_[s.edges[i].first] = saved[i];
    }
    alpha_[s.vertex] = 0;
  }

  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Side> enum_;
  std::vector<Weight> other_;
  std::vector<Weight> alpha_;
  std::vector<Weight> best_;
  Weight best_weight_ = 0;
};

}  // namespace

WVertexCover min_w_vertex_cover_bipartite(const MultiGraph& g, std::span<const EdgeId> subset, std::uint64_t budget) {
  auto sides = g.bipartition(subset);
  if (!sides) throw PreconditionError("w-vertex-cover oracle needs a bipartite edge set");
  return CoverSearch(g, subset, *sides, budget).run();
}

WVertexCover min_w_vertex_cover_bipartite(const MultiGraph& g, std::uint64_t budget) {
  return min_w_vertex_cover_bipartite(g, g.all_edge_ids(), budget);
}

// ---------------------------------------------------------------------------

Buckets distribute_edges(std::span<const NeighborGroup> groups, std::int64_t b_v) {
  if (b_v < 1) throw PreconditionError("b_v must be >= 1");
  const auto nb = static_cast<std::size_t>(b_v);
  Buckets buckets(nb);
  std::vector<Weight> load(nb, 0);
  std::vector<std::uint8_t> used_for_matching(nb, 0);
  std::vector<std::size_t> order(nb);

  // Buckets sorted by (weight, index) among those passing `eligible`.
  auto lightest = [&](auto eligible) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nb; ++i)
      if (eligible(i)) out.push_back(i);
    std::sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) {
      return load[x] != load[y] ? load[x] < load[y] : x < y;
    });
    return out;
  };

  for (const auto& group : groups) {
    const auto& items = group.items;
    if (items.size() > nb) throw PreconditionError("neighbour group larger than b_v");
    std::size_t matched = 0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (j > 0 && items[j].weight > items[j - 1].weight)
        throw PreconditionError("neighbour group not in non-increasing weight order");
      if (items[j].matched) {
        if (matched != j) throw PreconditionError("matched edges must lead their neighbour group");
        ++matched;
      }
    }

    auto free_for_matching = lightest([&](std::size_t i) { return !used_for_matching[i]; });
    if (free_for_matching.size() < matched) throw PreconditionError("more matched edges than b_v");
    std::vector<std::uint8_t> taken(nb, 0);
    for (std::size_t j = 0; j < matched; ++j) {
      const std::size_t i = free_for_matching[j];
      buckets[i].push_back(items[j]);
      load[i] += items[j].weight;
      used_for_matching[i] = 1;
      taken[i] = 1;
    }
    // Remaining items; the proof's weight-0 padding would fill the leftover buckets
    // without changing any load, so it is left implicit.
    auto rest = lightest([&](std::size_t i) { return !taken[i]; });
    for (std::size_t j = matched; j < items.size(); ++j) {
      const std::size_t i = rest[j - matched];
      buckets[i].push_back(items[j]);
    }
    for (std::size_t j = matched; j < items.size(); ++j) load[rest[j - matched]] += items[j].weight;
  }
  return buckets;
}

DistributionCheck check_distribution(std::span<const NeighborGroup> groups, const Buckets& buckets,
                                     std::int64_t b_v, Weight max_weight) {
  DistributionCheck check;
  // map each item back to its neighbour via (group index) lookup on edge handle
  std::map<EdgeId, Vertex> neighbor_of;
  Weight wdeg_h = 0;
  for (const auto& g : groups)
    for (const auto& it : g.items) {
      neighbor_of[it.edge] = g.neighbor;
      if (it.in_h) wdeg_h += it.weight;
    }
  Weight lo = std::numeric_limits<Weight>::max(), hi = std::numeric_limits<Weight>::min();
  for (const auto& bucket : buckets) {
    Weight total = 0;
    int matched = 0;
    std::vector<Vertex> seen;
    for (const auto& it : bucket) {
      total += it.weight;
      matched += it.matched ? 1 : 0;
      seen.push_back(neighbor_of.at(it.edge));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) check.one_edge_per_neighbor = false;
    if (matched > 1) check.one_matched_per_bucket = false;
    // total ∈ [wdeg_h/b − 2W, wdeg_h/b + 3W], scaled by b
    if (total * b_v < wdeg_h - 2 * max_weight * b_v || total * b_v > wdeg_h + 3 * max_weight * b_v)
      check.weight_window = false;
    lo = std::min(lo, total);
    hi = std::max(hi, total);
  }
  check.max_spread = buckets.empty() ? 0 : hi - lo;
  return check;
}

VertexSplit vertex_split(const MultiGraph& g, const Capacities& b, const Subgraph& h, const BMatching& m) {
  if (&h.parent() != &g) throw PreconditionError("subgraph does not belong to this graph");
  if (!is_b_matching(g, b, m)) throw PreconditionError("M is not a b-matching of G");
  const std::size_t n = g.vertex_count();
  std::vector<std::uint8_t> in_m(g.edge_count(), 0);
  for (EdgeId id : m.members) in_m[id] = 1;

  VertexSplit split;
  split.first_copy.resize(n);
  Vertex copies = 0;
  for (Vertex v = 0; v < n; ++v) {
    split.first_copy[v] = copies;
    for (std::int64_t i = 0; i < b[v]; ++i) split.vertex_origin.push_back(v);
    copies += static_cast<Vertex>(b[v]);
  }

  // copy index of each endpoint: [id][0] at e.u, [id][1] at e.v
  std::vector<std::array<std::int64_t, 2>> slot(g.edge_count(), {-1, -1});
  for (Vertex v = 0; v < n; ++v) {
    std::map<Vertex, std::vector<DistItem>> by_neighbor;
    for (EdgeId id : g.incident(v)) {
      if (!h.contains(id) && !in_m[id]) continue;
      const auto& e = g.edge(id);
      by_neighbor[e.other(v)].push_back({id, e.w, in_m[id] != 0, h.contains(id)});
    }
    std::vector<NeighborGroup> groups;
    for (auto& [u, items] : by_neighbor) {
      if (static_cast<std::int64_t>(items.size()) > b.pair_limit(u, v))
        throw PreconditionError("more than min(b_u, b_v) edges of H ∪ M between a pair");
      std::sort(items.begin(), items.end(), [](const DistItem& x, const DistItem& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        if (x.matched != y.matched) return x.matched;
        return x.edge < y.edge;
      });
      bool seen_unmatched = false;
      for (const auto& it : items) {
        if (!it.matched)
          seen_unmatched = true;
        else if (seen_unmatched)
          throw PreconditionError("M does not use the heaviest H ∪ M edges between a pair");
      }
      groups.push_back({u, std::move(items)});
    }
    const auto buckets = distribute_edges(groups, b[v]);
    for (std::size_t i = 0; i < buckets.size(); ++i)
      for (const auto& it : buckets[i]) slot[it.edge][g.edge(it.edge).u == v ? 0 : 1] = static_cast<std::int64_t>(i);
  }

  std::vector<EdgeSpec> specs;
  for (const auto& e : g.edges()) {
    if (!h.contains(e.id) && !in_m[e.id]) continue;
    const auto new_id = static_cast<EdgeId>(specs.size());
    specs.push_back({static_cast<Vertex>(split.first_copy[e.u] + slot[e.id][0]),
                     static_cast<Vertex>(split.first_copy[e.v] + slot[e.id][1]), e.w});
    split.edge_origin.push_back(e.id);
    if (h.contains(e.id)) split.h_edges.push_back(new_id);
    if (in_m[e.id]) split.m_edges.push_back(new_id);
  }
  split.graph = MultiGraph(copies, g.max_weight(), specs);
  return split;
}

}  // namespace edcs
