#pragma once

// Independent reference implementations used as test oracles.

#include <functional>
#include <vector>

#include "edcs/edcs.hpp"
#include "edcs/generators.hpp"
#include "edcs/matching.hpp"

namespace edcs::testing {

/// Maximum b-matching weight by enumerating every edge subset (m ≤ ~20).
inline Weight brute_force_matching(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset) {
  const std::size_t m = subset.size();
  Weight best = 0;
  std::vector<std::int64_t> load(g.vertex_count());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::fill(load.begin(), load.end(), 0);
    Weight w = 0;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& e = g.edge(subset[i]);
      ok = ++load[e.u] <= b[e.u] && ++load[e.v] <= b[e.v];
      w += e.w;
    }
    if (ok) best = std::max(best, w);
  }
  return best;
}

inline Weight brute_force_matching(const MultiGraph& g, const Capacities& b) {
  const auto ids = g.all_edge_ids();
  return brute_force_matching(g, b, ids);
}

/// Weighted degree recounted from the member list.
inline Weight recount_wdeg(const MultiGraph& g, const std::vector<EdgeId>& members, Vertex v) {
  Weight s = 0;
  for (EdgeId id : members) {
    const auto& e = g.edge(id);
    if (e.u == v || e.v == v) s += e.w;
  }
  return s;
}

/// Both EDCS properties evaluated with rationals straight from the definition.
inline bool definition_holds(const MultiGraph& g, const Capacities& b, const std::vector<EdgeId>& members,
                             const EdcsParams& p) {
  std::vector<std::uint8_t> in(g.edge_count(), 0);
  for (EdgeId id : members) in[id] = 1;
  for (const auto& e : g.edges()) {
    const Rational lhs = Rational(recount_wdeg(g, members, e.u), b[e.u]) + Rational(recount_wdeg(g, members, e.v), b[e.v]);
    if (in[e.id] && lhs > Rational(p.beta * e.w)) return false;
    if (!in[e.id] && lhs < Rational(p.beta_minus * e.w)) return false;
  }
  return true;
}

inline Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t m, Weight w, std::int64_t b_max,
                                bool bipartite, bool raw = false) {
  GenSpec s;
  s.n = n;
  s.m = m;
  s.max_weight = w;
  s.b_min = 1;
  s.b_max = b_max;
  s.seed = seed;
  s.bipartite = bipartite;
  s.raw_multiplicity = raw;
  return gen_random(s);
}

inline EdcsParams practical(std::int64_t beta, Weight w, std::int64_t beta_minus = -1) {
  EdcsParams p;
  p.max_weight = w;
  p.beta = beta;
  p.beta_minus = beta_minus < 0 ? beta - 2 : beta_minus;
  return p;
}

// Random neighbour groups satisfying the distribution preconditions.
inline std::vector<NeighborGroup> random_groups(Rng& rng, std::int64_t b_v, Weight w_max) {
  std::vector<NeighborGroup> groups;
  EdgeId next = 0;
  std::int64_t matched_left = b_v;
  const auto count = rng.between(0, 8);
  for (std::int64_t g = 0; g < count; ++g) {
    NeighborGroup group{static_cast<Vertex>(g + 1), {}};
    const auto size = rng.between(1, b_v);
    std::vector<Weight> ws;
    for (std::int64_t j = 0; j < size; ++j) ws.push_back(rng.between(1, w_max));
    std::sort(ws.rbegin(), ws.rend());
    const auto matched = std::min<std::int64_t>(matched_left, rng.between(0, size));
    matched_left -= matched;
    for (std::int64_t j = 0; j < size; ++j) {
      const bool m = j < matched;
      group.items.push_back(DistItem{next++, ws[static_cast<std::size_t>(j)], m, !m || rng.below(4) != 0});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace edcs::testing
