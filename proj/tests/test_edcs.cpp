#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edcs/edcs.hpp"
#include "support.hpp"

using namespace edcs;
using testing::practical;

namespace {

// Φ recomputed from scratch with per-vertex rationals.
Rational potential_by_hand(const MultiGraph& g, const Capacities& b, const std::vector<EdgeId>& members,
                           const EdcsParams& p) {
  Rational phi = 0;
  for (EdgeId id : members) phi += Rational(2 * p.beta - 2) * g.edge(id).w * g.edge(id).w;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const Weight d = testing::recount_wdeg(g, members, v);
    phi -= Rational(d * d, b[v]);
  }
  return phi;
}

}  // namespace

TEST_CASE("theorem parameters for epsilon 0.4, W 1") {
  auto p = parameters_for(Fraction{2, 5}, 1, ParamMode::theorem);
  CHECK(p.beta == 1800435);
  CHECK(p.beta_minus == 1793248);
  CHECK(satisfies_theorem_conditions(p));
  EdcsParams smaller = p;
  smaller.beta = p.beta - 1;
  smaller.beta_minus = smaller.beta - 2;
  CHECK_FALSE(satisfies_theorem_conditions(smaller));
  EdcsParams lower = p;
  lower.beta_minus = p.beta_minus - 1;
  CHECK_FALSE(satisfies_theorem_conditions(lower));
}

TEST_CASE("theorem parameters grow with W") {
  auto p1 = parameters_for(Fraction{1, 4}, 1, ParamMode::theorem);
  auto p2 = parameters_for(Fraction{1, 4}, 2, ParamMode::theorem);
  CHECK(p2.beta > p1.beta);
  CHECK(satisfies_theorem_conditions(p2));
  CHECK(p2.lambda.num * 800 == p2.lambda.den);  // ε/(100W) = 1/800
}

TEST_CASE("practical parameters and validation of parameters") {
  auto p = parameters_for(Fraction{1, 10}, 3, ParamMode::practical, 12);
  CHECK(p.beta == 12);
  CHECK(p.beta_minus == 10);
  CHECK_THROWS_AS(parameters_for(Fraction{1, 10}, 3, ParamMode::practical), PreconditionError);
  CHECK_THROWS_AS(parameters_for(Fraction{1, 2}, 3, ParamMode::theorem), PreconditionError);
  CHECK_THROWS_AS(practical(5, 1, 4).check(), PreconditionError);
  CHECK_NOTHROW(practical(6, 1, 4).check());
}

TEST_CASE("edge degree comparison is exact") {
  // wdeg(0)=3 with b=2, wdeg(1)=1 with b=3: 3/2 + 1/3 = 11/6
  std::vector<EdgeSpec> e{{0, 1, 1}, {0, 2, 2}, {1, 3, 1}};
  MultiGraph g(4, 2, e);
  Capacities b(std::vector<std::int64_t>{2, 3, 1, 1});
  std::vector<EdgeId> only_others{1, 2};
  Subgraph h(g, only_others);
  h.insert(0);
  // 4/2 + 2/3 = 8/3 against factor·w with w = 1
  CHECK(compare_edge_degree(h, b, g.edge(0), 2) > 0);
  CHECK(compare_edge_degree(h, b, g.edge(0), 3) < 0);
  std::vector<EdgeSpec> eq{{0, 1, 1}, {0, 2, 1}};
  MultiGraph g2(3, 1, eq);
  std::vector<EdgeId> all{0, 1};
  Subgraph h2(g2, all);
  // 2 + 1 = 3 exactly
  CHECK(compare_edge_degree(h2, Capacities::uniform(3), g2.edge(0), 3) == 0);
}

TEST_CASE("validate agrees with the definition and the serial reference") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testing::random_instance(seed, 15, 60, 3, 3, seed % 2 == 0);
    const auto& g = inst.graph;
    Rng rng(seed + 100);
    Subgraph h(g);
    for (const auto& e : g.edges())
      if (rng.below(2)) h.insert(e.id);
    auto p = practical(4 + static_cast<std::int64_t>(seed % 5), 3);
    auto par = validate(g, inst.capacities, h, p);
    auto ser = validate_serial(g, inst.capacities, h, p);
    CHECK(par.upper_violations == ser.upper_violations);
    CHECK(par.lower_violations == ser.lower_violations);
    CHECK(par.clean() == testing::definition_holds(g, inst.capacities, h.members(), p));
  }
}

TEST_CASE("deliberate violations are reported") {
  std::vector<EdgeSpec> e{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  MultiGraph g(4, 1, e);
  auto b = Capacities::uniform(4);
  std::vector<EdgeId> all{0, 1, 2};
  // middle edge has degree sum 4 > β = 3
  auto r = validate(g, b, Subgraph(g, all), practical(3, 1, 1));
  CHECK(r.upper_violations == std::vector<EdgeId>{1});
  CHECK(r.lower_violations.empty());
  auto empty = validate(g, b, Subgraph(g), practical(3, 1, 1));
  CHECK(empty.lower_violations == all);
}

TEST_CASE("potential step matches full recomputation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed, 10, 40, 4, 4, false);
    const auto& g = inst.graph;
    auto p = practical(7, 4);
    Subgraph h(g);
    Rng rng(seed);
    for (int step = 0; step < 60; ++step) {
      const auto& e = g.edge(static_cast<EdgeId>(rng.below(g.edge_count())));
      const Rational before = potential(h, inst.capacities, p);
      CHECK(before == potential_by_hand(g, inst.capacities, h.members(), p));
      const int sign = h.contains(e.id) ? -1 : 1;
      const auto step_delta = potential_step(h, inst.capacities, p, e, sign);
      if (sign > 0)
        h.insert(e.id);
      else
        h.erase(e.id);
      CHECK(potential(h, inst.capacities, p) - before == step_delta.value());
    }
  }
}

TEST_CASE("single edge and empty graphs") {
  std::vector<EdgeSpec> one{{0, 1, 5}};
  MultiGraph g(2, 5, one);
  auto r = build_w_edcs(g, practical(3, 5, 1));
  CHECK(r.h.size() == 1);
  CHECK(r.steps == 1);
  MultiGraph empty(4, 1, {});
  auto re = build_w_edcs(empty, practical(3, 1, 1));
  CHECK(re.h.empty());
  CHECK(re.steps == 0);
}

TEST_CASE("builder preconditions") {
  std::vector<EdgeSpec> par{{0, 1, 1}, {0, 1, 1}};
  MultiGraph g(2, 1, par);
  CHECK_THROWS_AS(build_w_edcs(g, practical(4, 1)), PreconditionError);
  CHECK_THROWS_AS(build_wb_edcs(g, Capacities::uniform(2), practical(4, 1)), PreconditionError);
  CHECK_NOTHROW(build_wb_edcs(g, Capacities::uniform(2, 2), practical(4, 1)));
  CHECK_THROWS_AS(build_wb_edcs(g, Capacities::uniform(3, 2), practical(4, 1)), PreconditionError);
}

TEST_CASE("builds are valid, monotone and bounded") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const bool simple = seed % 3 == 0;
    auto inst = testing::random_instance(seed, 20, 80, 1 + seed % 4, simple ? 1 : 4, seed % 2 == 1);
    const auto& g = inst.graph;
    const auto& b = inst.capacities;
    auto p = practical(static_cast<std::int64_t>(4 + seed % 9), g.max_weight());
    BuildOptions o;
    o.record_trace = true;
    auto r = simple && g.is_simple() ? build_w_edcs(g, p, o) : build_wb_edcs(g, b, p, o);
    const auto members = r.h.members();
    CHECK(testing::definition_holds(g, b, members, p));
    CHECK(r.potential_monotone);
    CHECK(r.degree_cap_held);
    CHECK(r.h.cache_consistent());
    CHECK(r.trace.size() == r.steps);
    Rational sum = 0;
    for (const auto& s : r.trace) sum += s.delta.value();
    CHECK(sum == potential(r.h, b, p));
    // final Φ ≤ Φ_max, so steps ≤ Φ_max / min increase
    const auto m = max_weight_b_matching_exact(g, b);
    const auto bmax = *std::max_element(b.values().begin(), b.values().end());
    CHECK(r.steps <= wb_step_bound(p, m.members.size(), bmax));
    if (bmax == 1) CHECK(r.steps <= w_step_bound(p, g.vertex_count()));
    if (r.min_step) CHECK(*r.min_step > 1);
    for (Vertex v = 0; v < g.vertex_count(); ++v) CHECK(static_cast<std::int64_t>(r.h.degree(v)) <= p.beta * b[v]);
  }
}

TEST_CASE("builder is deterministic") {
  auto inst = testing::random_instance(9, 25, 120, 3, 3, false);
  auto a = build_wb_edcs(inst.graph, inst.capacities, practical(6, 3));
  auto c = build_wb_edcs(inst.graph, inst.capacities, practical(6, 3));
  CHECK(a.h.members() == c.h.members());
  CHECK(a.steps == c.steps);
}

TEST_CASE("theorem-scale beta keeps every edge") {
  auto p = parameters_for(Fraction{2, 5}, 1, ParamMode::theorem);
  auto inst = testing::random_instance(4, 12, 30, 1, 1, false);
  auto r = build_w_edcs(inst.graph, p);
  CHECK(r.h.size() == inst.graph.edge_count());
}
