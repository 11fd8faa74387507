#include "edcs/edcs.hpp"

#include <cmath>
#include <deque>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edcs {

void EdcsParams::check() const {
  if (beta_minus < 0) throw PreconditionError("beta_minus must be >= 0");
  if (beta < beta_minus + 2) throw PreconditionError("beta must be >= beta_minus + 2");
  if (max_weight < 1) throw PreconditionError("W must be >= 1");
}

namespace {

// (β+8W)/ln(β+8W) ≥ 2W²/λ²  with λ = ε/(100W)
bool first_condition(std::int64_t beta, Weight w, Fraction eps) {
  const double x = static_cast<double>(beta + 8 * w);
  const double lambda = eps.value() / (100.0 * static_cast<double>(w));
  return x / std::log(x) >= 2.0 * static_cast<double>(w * w) / (lambda * lambda);
}

// β⁻ − 6W ≥ (1−λ)(β+8W), cross-multiplied by 100·W·q with λ = p/(100·W·q).
bool second_condition(std::int64_t beta, std::int64_t beta_minus, Weight w, Fraction eps) {
  const __int128 scale = static_cast<__int128>(100) * w * eps.den;
  return static_cast<__int128>(beta_minus - 6 * w) * scale >=
         (scale - eps.num) * static_cast<__int128>(beta + 8 * w);
}

// Smallest β⁻ meeting the second condition for this β.
std::int64_t min_beta_minus(std::int64_t beta, Weight w, Fraction eps) {
  const __int128 scale = static_cast<__int128>(100) * w * eps.den;
  const __int128 rhs = (scale - eps.num) * static_cast<__int128>(beta + 8 * w);
  const __int128 q = (rhs + scale - 1) / scale;  // ceil, rhs > 0
  return static_cast<std::int64_t>(q) + 6 * w;
}

}  // namespace

EdcsParams parameters_for(Fraction epsilon, Weight max_weight, ParamMode mode,
                          std::optional<std::int64_t> practical_beta) {
  if (epsilon.num <= 0 || epsilon.den <= 0 || 2 * epsilon.num >= epsilon.den)
    throw PreconditionError("epsilon must lie in (0, 1/2)");
  if (max_weight < 1) throw PreconditionError("W must be >= 1");
  EdcsParams p;
  p.max_weight = max_weight;
  p.epsilon = epsilon;
  p.lambda = {epsilon.num, epsilon.den * 100 * max_weight};

  if (mode == ParamMode::practical) {
    if (!practical_beta) throw PreconditionError("practical mode needs a beta");
    p.beta = *practical_beta;
    p.beta_minus = *practical_beta - 2;
    p.check();
    return p;
  }

  constexpr std::int64_t kCap = std::int64_t{1} << 32;
  auto feasible = [&](std::int64_t beta) {
    return first_condition(beta, max_weight, epsilon) &&
           min_beta_minus(beta, max_weight, epsilon) <= beta - 2;
  };
  // Both conditions are monotone in β, so bisection finds the same β as an ascending scan.
  if (!feasible(kCap)) throw PreconditionError("no valid (beta, beta_minus) below 2^32 for this epsilon and W");
  std::int64_t lo = 3, hi = kCap;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  p.beta = lo;
  p.beta_minus = min_beta_minus(lo, max_weight, epsilon);
  return p;
}

bool satisfies_theorem_conditions(const EdcsParams& p) {
  return p.beta >= p.beta_minus + 2 && first_condition(p.beta, p.max_weight, p.epsilon) &&
         second_condition(p.beta, p.beta_minus, p.max_weight, p.epsilon);
}

int compare_edge_degree(const Subgraph& h, const Capacities& b, const WeightedEdge& e, std::int64_t factor) {
  const __int128 bu = b[e.u], bv = b[e.v];
  const __int128 lhs = static_cast<__int128>(h.weighted_degree(e.u)) * bv + static_cast<__int128>(h.weighted_degree(e.v)) * bu;
  const __int128 rhs = static_cast<__int128>(factor) * e.w * bu * bv;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

namespace {

// Violation kind of a single edge: 1 upper, 2 lower, 0 none.
int classify(const Subgraph& h, const Capacities& b, const EdcsParams& p, const WeightedEdge& e) {
  if (h.contains(e.id)) return compare_edge_degree(h, b, e, p.beta) > 0 ? 1 : 0;
  return compare_edge_degree(h, b, e, p.beta_minus) < 0 ? 2 : 0;
}

void require_same_parent(const MultiGraph& g, const Subgraph& h) {
  if (&h.parent() != &g) throw PreconditionError("subgraph does not belong to this graph");
}

}  // namespace

ViolationReport validate_serial(const MultiGraph& g, const Capacities& b, const Subgraph& h,
                                const EdcsParams& p) {
  require_same_parent(g, h);
  ViolationReport report;
  for (const auto& e : g.edges()) {
    switch (classify(h, b, p, e)) {
      case 1: report.upper_violations.push_back(e.id); break;
      case 2: report.lower_violations.push_back(e.id); break;
      default: break;
    }
  }
  return report;
}

ViolationReport validate(const MultiGraph& g, const Capacities& b, const Subgraph& h, const EdcsParams& p) {
  require_same_parent(g, h);
  const auto edges = g.edges();
  const auto m = static_cast<std::int64_t>(edges.size());
  std::vector<std::uint8_t> kind(edges.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i) kind[i] = static_cast<std::uint8_t>(classify(h, b, p, edges[i]));

  ViolationReport report;
  for (std::int64_t i = 0; i < m; ++i) {
    if (kind[i] == 1) report.upper_violations.push_back(static_cast<EdgeId>(i));
    if (kind[i] == 2) report.lower_violations.push_back(static_cast<EdgeId>(i));
  }
  return report;
}

Rational potential(const Subgraph& h, const Capacities& b, const EdcsParams& p) {
  const auto& g = h.parent();
  Rational phi = 0;
  boost::multiprecision::cpp_int squares = 0;
  for (EdgeId id : h.members()) squares += g.edge(id).w * g.edge(id).w;
  phi += Rational(squares * (2 * p.beta - 2));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto d = h.weighted_degree(v);
    if (d != 0) phi -= Rational(boost::multiprecision::cpp_int(d) * d, b[v]);
  }
  return phi;
}

Rational PotentialStep::value() const {
  // cpp_int has no __int128 constructor; split into two 64-bit halves.
  const bool neg = scaled_delta < 0;
  const unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-scaled_delta)
                                    : static_cast<unsigned __int128>(scaled_delta);
  boost::multiprecision::cpp_int num = static_cast<std::uint64_t>(mag >> 64);
  num <<= 64;
  num += static_cast<std::uint64_t>(mag);
  if (neg) num = -num;
  return Rational(num, scale);
}

PotentialStep potential_step(const Subgraph& h, const Capacities& b, const EdcsParams& p, const WeightedEdge& e,
                             int sign) {
  const __int128 bu = b[e.u], bv = b[e.v], w = e.w;
  const __int128 du = h.weighted_degree(e.u), dv = h.weighted_degree(e.v);
  PotentialStep step;
  step.scale = static_cast<std::int64_t>(bu * bv);
  const __int128 edge_term = static_cast<__int128>(2 * p.beta - 2) * w * w * bu * bv;
  if (sign > 0)
    step.scaled_delta = edge_term - (2 * du * w + w * w) * bv - (2 * dv * w + w * w) * bu;
  else
    step.scaled_delta = -edge_term + (2 * du * w - w * w) * bv + (2 * dv * w - w * w) * bu;
  return step;
}

BuildResult build_wb_edcs(const MultiGraph& g, const Capacities& b, const EdcsParams& p, BuildOptions options) {
  p.check();
  if (b.size() != g.vertex_count()) throw PreconditionError("capacity vector size differs from vertex count");
  if (!multiplicity_within_capacity(g, b))
    throw PreconditionError("more than min(b_u, b_v) parallel edges between some pair; use relevant_subgraph first");

  BuildResult result{Subgraph(g), 0, {}, true, std::nullopt, true};
  Subgraph& h = result.h;
  const std::size_t m = g.edge_count();
  std::deque<EdgeId> upper_queue, lower_queue;
  std::vector<std::uint8_t> in_upper(m, 0), in_lower(m, 0);

  for (EdgeId id = 0; id < m; ++id) {
    lower_queue.push_back(id);
    in_lower[id] = 1;
  }

  std::vector<EdgeId> batch;
  // After a degree change at u and v, re-enqueue the edges whose status may flip.
  auto requeue = [&](const WeightedEdge& changed, bool members) {
    batch.clear();
    for (Vertex x : {changed.u, changed.v}) {
      if (members) {
        for (EdgeId id : h.incident(x))
          if (!in_upper[id]) batch.push_back(id);
      } else {
        for (EdgeId id : g.incident(x))
          if (!h.contains(id) && !in_lower[id]) batch.push_back(id);
      }
    }
    std::sort(batch.begin(), batch.end());
    batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
    for (EdgeId id : batch) {
      if (members) {
        upper_queue.push_back(id);
        in_upper[id] = 1;
      } else {
        lower_queue.push_back(id);
        in_lower[id] = 1;
      }
    }
  };

  auto apply = [&](StepKind kind, const WeightedEdge& e) {
    const auto delta = potential_step(h, b, p, e, kind == StepKind::insert ? 1 : -1);
    if (delta.scaled_delta < min_scaled_increase(b[e.u], b[e.v])) result.potential_monotone = false;
    const Rational value = delta.value();
    if (!result.min_step || value < *result.min_step) result.min_step = value;
    if (kind == StepKind::insert)
      h.insert(e.id);
    else
      h.erase(e.id);
    ++result.steps;
    if (options.record_trace) result.trace.push_back({kind, e.id, delta});
    for (Vertex x : {e.u, e.v})
      if (static_cast<std::int64_t>(h.degree(x)) > p.beta * b[x] + 1) result.degree_cap_held = false;
  };

  while (!upper_queue.empty() || !lower_queue.empty()) {
    if (!upper_queue.empty()) {
      const EdgeId id = upper_queue.front();
      upper_queue.pop_front();
      in_upper[id] = 0;
      const auto& e = g.edge(id);
      if (h.contains(id) && compare_edge_degree(h, b, e, p.beta) > 0) {
        apply(StepKind::remove, e);
        requeue(e, false);
        if (!in_lower[id]) {
          lower_queue.push_back(id);
          in_lower[id] = 1;
        }
      }
      continue;
    }
    const EdgeId id = lower_queue.front();
    lower_queue.pop_front();
    in_lower[id] = 0;
    const auto& e = g.edge(id);
    if (!h.contains(id) && compare_edge_degree(h, b, e, p.beta_minus) < 0) {
      apply(StepKind::insert, e);
      requeue(e, true);
    }
  }
  return result;
}

BuildResult build_w_edcs(const MultiGraph& g, const EdcsParams& p, BuildOptions options) {
  if (!g.is_simple()) throw PreconditionError("build_w_edcs needs a simple graph");
  return build_wb_edcs(g, Capacities::uniform(g.vertex_count()), p, options);
}

std::int64_t min_scaled_increase(std::int64_t bu, std::int64_t bv) { return 2 * bu * bv + 2 - bu - bv; }

std::uint64_t wb_step_bound(const EdcsParams& p, std::uint64_t matching_size, std::int64_t max_capacity) {
  const unsigned __int128 beta = static_cast<unsigned __int128>(p.beta), w = static_cast<unsigned __int128>(p.max_weight);
  const unsigned __int128 phi_max = 2 * beta * w * w * 2 * beta * matching_size;
  // smallest increase over all pairs is 1 + 1/b_max
  const auto bm = static_cast<unsigned __int128>(std::max<std::int64_t>(max_capacity, 1));
  return static_cast<std::uint64_t>(phi_max * bm / (bm + 1));
}

std::uint64_t w_step_bound(const EdcsParams& p, std::size_t n) {
  const unsigned __int128 beta = static_cast<unsigned __int128>(p.beta), w = static_cast<unsigned __int128>(p.max_weight);
  return static_cast<std::uint64_t>(2 * beta * beta * w * w * n / 2);
}

}  // namespace edcs
