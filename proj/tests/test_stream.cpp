#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edcs/stream.hpp"
#include "edcs/trials.hpp"
#include "support.hpp"

using namespace edcs;
using testing::practical;

namespace {

MultiGraph make(std::size_t n, Weight w, std::vector<EdgeSpec> e) { return MultiGraph(n, w, e); }

// The setting where the interval formula is nonzero at moderate m.
struct PhaseOneCase {
  Instance inst;
  EdcsParams p = practical(4, 1, 2);
  Fraction eps{2, 5};
  StreamOptions options;

  explicit PhaseOneCase(std::uint64_t seed) : inst(testing::random_instance(seed, 200, 4500, 1, 1, seed % 2 == 0)) {
    options.small_output = false;
  }
};

}  // namespace

TEST_CASE("streams are seeded permutations") {
  auto inst = testing::random_instance(1, 30, 100, 2, 1, false);
  auto a = make_stream(inst.graph, 5);
  auto b = make_stream(inst.graph, 5);
  auto c = make_stream(inst.graph, 6);
  CHECK(a.order() == b.order());
  CHECK(a.order() != c.order());
  CHECK(a.length() == 100);
  std::vector<EdgeId> seen;
  while (!a.done()) seen.push_back(a.next().id);
  CHECK(seen == b.order());
  a.rewind();
  CHECK(a.position() == 0);

  auto one = make(2, 1, {{0, 1, 1}});
  CHECK(make_stream(one, 99).order() == std::vector<EdgeId>{0});
  MultiGraph none(2, 1, {});
  CHECK(make_stream(none, 3).done());
  CHECK_THROWS_AS(EdgeStream(one, {}), PreconditionError);
  CHECK_THROWS_AS(EdgeStream(inst.graph, std::vector<EdgeId>(100, 0)), PreconditionError);
}

TEST_CASE("underfull test is strict") {
  auto g = make(4, 1, {{0, 2, 1}, {1, 3, 1}, {0, 1, 1}});
  auto b = Capacities::uniform(4);
  std::vector<EdgeId> two{0, 1};
  Subgraph h(g, two);
  CHECK_FALSE(is_underfull(h, b, g.edge(2), practical(4, 1, 2)));
  CHECK(is_underfull(h, b, g.edge(2), practical(5, 1, 3)));
  Subgraph empty(g);
  CHECK(is_underfull(empty, b, g.edge(2), practical(3, 1, 1)));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed, 10, 30, 3, 3, false);
    Subgraph r(inst.graph);
    Rng rng(seed);
    for (const auto& e : inst.graph.edges())
      if (rng.below(2)) r.insert(e.id);
    const auto members = r.members();
    auto p = practical(5, 3);
    for (const auto& e : inst.graph.edges()) {
      const Rational lhs = Rational(testing::recount_wdeg(inst.graph, members, e.u), inst.capacities[e.u]) +
                           Rational(testing::recount_wdeg(inst.graph, members, e.v), inst.capacities[e.v]);
      CHECK(is_underfull(r, inst.capacities, e, p) == (lhs < p.beta_minus * e.w));
    }
  }
}

TEST_CASE("interval sizes and levels") {
  CHECK(guess_levels(0) == 0);
  CHECK(guess_levels(1) == 1);
  CHECK(guess_levels(4) == 3);
  CHECK(guess_levels(5) == 3);
  auto p = practical(4, 1, 2);
  // ⌊0.4·4500 / (13·65)⌋ = 2, then ⌊1800 / (13·129)⌋ = 1
  CHECK(interval_size(4500, Fraction{2, 5}, p, 0) == 2);
  CHECK(interval_size(4500, Fraction{2, 5}, p, 1) == 1);
  CHECK(interval_size(4500, Fraction{2, 5}, p, 2) == 0);
  CHECK(interval_size(0, Fraction{2, 5}, p, 0) == 0);
  CHECK(default_small_output_cap(10, 1, Fraction{1, 2}, 1) > 0);
}

TEST_CASE("single edge and empty streams") {
  auto one = make(2, 5, {{0, 1, 5}});
  auto b = Capacities::uniform(2);
  for (bool small : {true, false}) {
    StreamOptions o;
    o.small_output = small;
    auto s = make_stream(one, 1);
    auto r = run_algorithm1(s, b, practical(4, 5), Fraction{1, 10}, o);
    CHECK(r.matching.weight == 5);
    CHECK(r.stats.fallback_used == (small ? Fallback::small_output : Fallback::alpha_zero));
  }
  MultiGraph none(3, 1, {});
  auto s = make_stream(none, 0);
  auto r = run_algorithm1(s, Capacities::uniform(3), practical(4, 1), Fraction{1, 10});
  CHECK(r.matching.weight == 0);
  CHECK(r.stats.peak_stored_edges == 0);
}

TEST_CASE("preconditions") {
  auto par = make(2, 2, {{0, 1, 1}, {0, 1, 2}});
  auto s = make_stream(par, 0);
  CHECK_THROWS_AS(run_algorithm1(s, Capacities::uniform(2), practical(4, 2), Fraction{1, 10}), PreconditionError);
  CHECK_NOTHROW(run_algorithm3(s, Capacities::uniform(2), practical(4, 2), Fraction{1, 10}));
  CHECK_THROWS_AS(run_algorithm3(s, Capacities::uniform(2), practical(4, 2), Fraction{1, 1}), PreconditionError);
  CHECK_THROWS_AS(run_algorithm3(s, Capacities::uniform(3), practical(4, 2), Fraction{1, 10}), PreconditionError);
}

TEST_CASE("tiny graphs take the small-output path") {
  auto inst = testing::random_instance(3, 6, 5, 3, 2, false);
  auto s = make_stream(inst.graph, 7);
  auto r = run_algorithm1(s, inst.capacities, practical(6, 3), Fraction{1, 10});
  CHECK(r.stats.fallback_used == Fallback::small_output);
  CHECK(r.matching.weight == max_weight_b_matching_exact(inst.graph, inst.capacities).weight);
}

TEST_CASE("alpha zero stores the late edges") {
  // dense graph, every vertex may take everything
  auto g = testing::random_instance(2, 12, 60, 3, 1, false).graph;
  const auto b = Capacities::uniform(12, 12);
  StreamOptions o;
  o.small_output = false;
  auto s = make_stream(g, 3);
  auto r = run_algorithm1(s, b, practical(6, 3), Fraction{1, 10}, o);
  CHECK(r.stats.fallback_used == Fallback::alpha_zero);
  CHECK(r.stats.final_guess_i == 0);
  CHECK(r.stored.size() == 60);
  CHECK(r.stats.phase1_edges_consumed == 0);
  const auto opt = max_weight_b_matching_exact(g, b).weight;
  CHECK(r.matching.weight * 10 >= opt * 8);
}

TEST_CASE("phase 1 runs and stays within its budget") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    PhaseOneCase c(seed);
    const auto& g = c.inst.graph;
    auto s = make_stream(g, seed);
    c.options.check_invariants = true;
    auto r = run_algorithm1(s, c.inst.capacities, c.p, c.eps, c.options);
    const auto& st = r.stats;
    CHECK(st.fallback_used == Fallback::none);
    CHECK(st.process_stopped);
    CHECK(st.phase1_edges_consumed > 0);
    CHECK(st.phase1_edges_consumed <= st.phase1_budget);
    CHECK(st.bounded_degree_held);
    CHECK(st.peak_stored_edges >= st.h_size + st.underfull_collected);
    CHECK(st.h_size == r.h.size());
    CHECK(r.h.cache_consistent());
    // H has bounded weighted edge-degree β
    for (EdgeId id : r.h.members()) CHECK(compare_edge_degree(r.h, c.inst.capacities, g.edge(id), c.p.beta) <= 0);
    // X is exactly the underfull part of E^late against the final H
    std::vector<EdgeId> expect;
    for (std::size_t i = st.phase1_edges_consumed; i < s.length(); ++i) {
      const auto& e = g.edge(s.order()[i]);
      if (is_underfull(r.h, c.inst.capacities, e, c.p)) expect.push_back(e.id);
    }
    CHECK(r.x == expect);
    CHECK(is_b_matching(g, c.inst.capacities, r.matching));
    // ⌈0.4·4500⌉
    CHECK(st.phase1_budget == 1800);
  }
}

TEST_CASE("sandwich property on the matched underfull edges") {
  PhaseOneCase c(1);
  const auto& g = c.inst.graph;
  const auto& b = c.inst.capacities;
  auto s = make_stream(g, 11);
  auto r = run_algorithm1(s, b, c.p, c.eps, c.options);
  std::vector<std::uint8_t> in_x(g.edge_count(), 0);
  for (EdgeId id : r.x) in_x[id] = 1;
  Subgraph hx = r.h;
  for (EdgeId id : r.matching.members)
    if (in_x[id]) hx.insert(id);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    CHECK(r.h.weighted_degree(v) <= hx.weighted_degree(v));
    CHECK(hx.weighted_degree(v) <= r.h.weighted_degree(v) + b[v] * g.max_weight());
  }
}

TEST_CASE("combination of a bounded H and its underfull edges") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = testing::random_instance(seed, 14, 40, 1 + seed % 3, 2, seed % 2 == 0);
    const auto& g = inst.graph;
    const auto& b = inst.capacities;
    const Weight w = g.max_weight();
    // H: an EDCS of the first half, which has bounded edge-degree in all of G
    std::vector<EdgeSpec> prefix;
    for (EdgeId id = 0; id < g.edge_count() / 2; ++id) prefix.push_back({g.edge(id).u, g.edge(id).v, g.edge(id).w});
    MultiGraph half(g.vertex_count(), w, prefix);
    auto p = practical(8, w);
    const auto built = build_wb_edcs(half, b, p).h.members();
    Subgraph h(g, built);
    std::vector<EdgeId> pool = built;
    for (const auto& e : g.edges())
      if (!h.contains(e.id) && is_underfull(h, b, e, p)) pool.push_back(e.id);
    std::sort(pool.begin(), pool.end());
    const auto opt = max_weight_b_matching_exact(g, b).weight;
    const auto got = max_weight_b_matching_exact(g, b, pool).weight;
    // (2 − 1/(2W) + ε)·got ≥ opt with ε = 1/2, scaled by 4W
    CHECK((8 * w - 2 + 2 * w) * got >= 4 * w * opt);
  }
}

TEST_CASE("runs replay deterministically") {
  PhaseOneCase c(2);
  auto s1 = make_stream(c.inst.graph, 4);
  auto s2 = make_stream(c.inst.graph, 4);
  auto a = run_algorithm1(s1, c.inst.capacities, c.p, c.eps, c.options);
  auto d = run_algorithm1(s2, c.inst.capacities, c.p, c.eps, c.options);
  CHECK(a.h.members() == d.h.members());
  CHECK(a.x == d.x);
  CHECK(a.matching.members == d.matching.members);
  CHECK(a.stats.peak_stored_edges == d.stats.peak_stored_edges);
  CHECK(a.stats.epoch_count == d.stats.epoch_count);
}

TEST_CASE("algorithm 3 equals algorithm 1 without parallel edges") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PhaseOneCase c(seed);
    auto s = make_stream(c.inst.graph, seed + 20);
    auto a1 = run_algorithm1(s, c.inst.capacities, c.p, c.eps, c.options);
    auto a3 = run_algorithm3(s, c.inst.capacities, c.p, c.eps, c.options);
    CHECK(a1.h.members() == a3.h.members());
    CHECK(a1.x == a3.x);
    CHECK(a1.matching.members == a3.matching.members);
    CHECK(a3.stats.replacements == 0);
  }
}

TEST_CASE("heavier parallel edge replaces the lighter one") {
  auto g = make(2, 3, {{0, 1, 1}, {0, 1, 3}});
  StreamOptions o;
  o.small_output = false;
  o.interval_override = 1;
  auto s = make_stream_as_is(g);
  auto r = run_algorithm3(s, Capacities::uniform(2), practical(12, 3, 10), Fraction{1, 2}, o);
  CHECK(r.h.members() == std::vector<EdgeId>{1});
  CHECK(r.stats.replacements == 1);
  CHECK(r.stats.replacement_potential_ok);
  CHECK(r.matching.weight == 3);

  // lighter second edge is ignored and does not count as underfull
  auto g2 = make(2, 3, {{0, 1, 3}, {0, 1, 1}});
  auto s2 = make_stream_as_is(g2);
  auto r2 = run_algorithm3(s2, Capacities::uniform(2), practical(12, 3, 10), Fraction{1, 2}, o);
  CHECK(r2.h.members() == std::vector<EdgeId>{0});
  CHECK(r2.stats.replacements == 0);
  CHECK(r2.stats.process_stopped);
}

TEST_CASE("replacements raise the potential on parallel-edge streams") {
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed, 10, 120, 4, 3, seed % 2 == 0, true);
    StreamOptions o;
    o.small_output = false;
    o.interval_override = 3;
    o.check_invariants = true;
    auto s = make_stream(inst.graph, seed);
    auto r = run_algorithm3(s, inst.capacities, practical(6, 4), Fraction{1, 2}, o);
    total += r.stats.replacements;
    CHECK(r.stats.replacement_potential_ok);
    CHECK(r.stats.bounded_degree_held);
    CHECK(is_b_matching(inst.graph, inst.capacities, r.matching));
  }
  CHECK(total > 0);
}

TEST_CASE("parallel trial harness matches the serial reference") {
  auto inst = testing::random_instance(8, 20, 80, 3, 3, true);
  TrialConfig config;
  config.params = practical(12, 3, 10);
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7};
  auto par = run_trials(inst.graph, inst.capacities, seeds, config, 4);
  auto ser = run_trials_serial(inst.graph, inst.capacities, seeds, config);
  REQUIRE(par.trials.size() == ser.trials.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(par.trials[i].seed == seeds[i]);
    CHECK(par.trials[i].matching.members == ser.trials[i].matching.members);
    CHECK(par.trials[i].ratio == ser.trials[i].ratio);
  }
  CHECK(par.peak_memory == ser.peak_memory);
  CHECK(par.failures == ser.failures);
  CHECK(par.min_ratio == ser.min_ratio);
  CHECK(par.oracle_weight.has_value());

  // a run that throws is recorded, not propagated
  auto multi = testing::random_instance(1, 4, 12, 2, 1, false, true);
  auto bad = run_trials(multi.graph, multi.capacities, {1}, config, 1);
  if (!multiplicity_within_capacity(multi.graph, multi.capacities)) {
    CHECK_FALSE(bad.trials[0].error.empty());
    CHECK(bad.failures == 1);
  }
}
