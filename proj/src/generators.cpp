#include "edcs/generators.hpp"

#include <json.hpp>
#include <map>
#include <utility>

namespace edcs {

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("generator spec: bad value for \"") + key + "\"");
  }
}

}  // namespace

GenSpec parse_gen_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("generator spec: ") + e.what());
  }
  if (!j.is_object()) throw InputError("generator spec must be a JSON object");
  GenSpec s;
  const auto kind = field<std::string>(j, "kind", "");
  if (kind == "random")
    s.kind = GenKind::random;
  else if (kind == "tight")
    s.kind = GenKind::tight;
  else if (kind == "multicopy")
    s.kind = GenKind::multicopy;
  else
    throw InputError("generator spec: kind must be random, tight or multicopy");
  s.n = field<std::size_t>(j, "n", 0);
  s.m = field<std::size_t>(j, "m", 0);
  s.max_weight = field<Weight>(j, "W", 1);
  s.b_min = field<std::int64_t>(j, "b_min", 1);
  s.b_max = field<std::int64_t>(j, "b_max", s.b_min);
  s.seed = field<std::uint64_t>(j, "seed", 0);
  s.bipartite = field<bool>(j, "bipartite", false);
  s.raw_multiplicity = field<bool>(j, "raw_multiplicity", false);
  s.k = field<std::int64_t>(j, "k", 1);
  if (j.contains("l")) s.l = field<std::int64_t>(j, "l", 0);
  if (j.contains("beta_minus")) s.beta_minus = field<std::int64_t>(j, "beta_minus", 0);
  return s;
}

Instance gen_random(const GenSpec& spec) {
  if (spec.max_weight < 1) throw InputError("W must be >= 1");
  if (spec.b_min < 1 || spec.b_max < spec.b_min) throw InputError("need 1 <= b_min <= b_max");
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  std::vector<std::int64_t> b(n);
  for (auto& x : b) x = rng.between(spec.b_min, spec.b_max);
  Capacities caps(b);

  const std::size_t left = spec.bipartite ? n / 2 : n;
  auto pair_count = [&]() -> std::size_t { return spec.bipartite ? left * (n - left) : n * (n - 1) / 2; };
  // k-th vertex pair in a fixed enumeration
  auto pair_at = [&](std::size_t k) -> std::pair<Vertex, Vertex> {
    if (spec.bipartite) return {static_cast<Vertex>(k / (n - left)), static_cast<Vertex>(left + k % (n - left))};
    Vertex u = 0;
    std::size_t row = n - 1;
    while (k >= row) {
      k -= row;
      ++u;
      --row;
    }
    return {u, static_cast<Vertex>(u + 1 + k)};
  };

  std::vector<EdgeSpec> edges;
  edges.reserve(spec.m);
  if (spec.m > 0) {
    if (pair_count() == 0) throw InputError("no vertex pairs available for edges");
    if (spec.raw_multiplicity) {
      for (std::size_t i = 0; i < spec.m; ++i) {
        auto [u, v] = pair_at(rng.below(pair_count()));
        edges.push_back({u, v, rng.between(1, spec.max_weight)});
      }
    } else {
      std::size_t capacity = 0;
      for (std::size_t k = 0; k < pair_count(); ++k) {
        auto [u, v] = pair_at(k);
        capacity += static_cast<std::size_t>(caps.pair_limit(u, v));
      }
      if (spec.m > capacity)
        throw InputError("m = " + std::to_string(spec.m) + " exceeds the pair capacity " + std::to_string(capacity));
      if (2 * spec.m > capacity) {
        // dense: sample slots without replacement
        std::vector<std::pair<Vertex, Vertex>> slots;
        for (std::size_t k = 0; k < pair_count(); ++k) {
          auto p = pair_at(k);
          for (std::int64_t c = 0; c < caps.pair_limit(p.first, p.second); ++c) slots.push_back(p);
        }
        for (std::size_t i = 0; i < spec.m; ++i) {
          std::swap(slots[i], slots[i + rng.below(slots.size() - i)]);
          edges.push_back({slots[i].first, slots[i].second, rng.between(1, spec.max_weight)});
        }
      } else {
        std::map<std::pair<Vertex, Vertex>, std::int64_t> used;
        while (edges.size() < spec.m) {
          auto p = pair_at(rng.below(pair_count()));
          auto& c = used[p];
          if (c == caps.pair_limit(p.first, p.second)) continue;
          ++c;
          edges.push_back({p.first, p.second, rng.between(1, spec.max_weight)});
        }
      }
    }
  }
  return {MultiGraph(n, spec.max_weight, edges), std::move(caps), {}, std::nullopt, {}, {}};
}

Instance gen_tight(std::int64_t k, Weight max_weight, std::optional<std::int64_t> beta_minus,
                   std::optional<std::int64_t> l) {
  if (k < 1 || max_weight < 1) throw InputError("tight instance needs k >= 1 and W >= 1");
  const std::int64_t bm = 2 * k * max_weight;
  if (beta_minus && *beta_minus != bm) {
    if (*beta_minus % (2 * max_weight) != 0) throw InputError("beta_minus must be divisible by 2W");
    throw InputError("beta_minus must equal 2kW = " + std::to_string(bm));
  }
  const std::int64_t l_min = bm - k + 1;
  const std::int64_t ll = l.value_or(l_min);
  if (ll < l_min) throw InputError("l must be >= 2kW - k + 1 = " + std::to_string(l_min));

  const auto K = static_cast<Vertex>(k), L = static_cast<Vertex>(ll);
  const Vertex a = 0, b = K, c = 2 * K, d = 2 * K + L, e = 2 * K + 2 * L, f = 3 * K + 2 * L;
  const Vertex n = 4 * K + 2 * L;
  std::vector<EdgeSpec> edges;
  std::vector<EdgeId> h;
  auto solid = [&](Vertex u, Vertex v) {
    h.push_back(static_cast<EdgeId>(edges.size()));
    edges.push_back({u, v, max_weight});
  };
  // complete blocks before the matchings: an id-order build then reproduces H for k >= 2
  for (Vertex i = 0; i < K; ++i)
    for (Vertex j = 0; j < L; ++j) solid(b + i, c + j);
  for (Vertex i = 0; i < K; ++i) solid(a + i, b + i);
  for (Vertex j = 0; j < L; ++j)
    for (Vertex i = 0; i < K; ++i) solid(d + j, e + i);
  for (Vertex i = 0; i < K; ++i) solid(e + i, f + i);
  for (Vertex j = 0; j < L; ++j) edges.push_back({c + j, d + j, 1});

  EdcsParams p;
  p.max_weight = max_weight;
  p.beta_minus = bm;
  p.beta = ll + k + 1;
  return {MultiGraph(n, max_weight, edges), Capacities::uniform(n), std::move(h), p, {}, {}};
}

Instance gen_multicopy(std::int64_t k, Weight max_weight) {
  if (k < 1 || max_weight < 2) throw InputError("multicopy instance needs k >= 1 and W >= 2");
  const auto K = static_cast<Vertex>(k);
  const auto Wv = static_cast<Vertex>(max_weight);
  auto A = [&](Vertex i) { return (i - 1) * K; };
  const Vertex B = Wv * K;
  auto C = [&](Vertex i) { return B + K + (i - 1) * K; };
  auto D = [&](Vertex i) { return B + K + Wv * K + (i - 1) * K; };
  const Vertex E = B + K + 2 * Wv * K;
  auto F = [&](Vertex i) { return E + K + (i - 1) * K; };
  const Vertex n = E + K + Wv * K;

  Instance out;
  out.class_edges.resize(Wv);
  out.class_h.resize(Wv);
  std::vector<EdgeSpec> edges;
  auto add = [&](Vertex u, Vertex v, Vertex cls, bool in_h) {
    const auto id = static_cast<EdgeId>(edges.size());
    edges.push_back({u, v, static_cast<Weight>(cls)});
    out.class_edges[cls - 1].push_back(id);
    if (in_h) {
      out.class_h[cls - 1].push_back(id);
      out.reference_h.push_back(id);
    }
  };
  for (Vertex i = 1; i <= Wv; ++i) {
    for (Vertex x = 0; x < K; ++x) add(A(i) + x, B + x, i, true);
    for (Vertex x = 0; x < K; ++x)
      for (Vertex y = 0; y < K; ++y) add(C(i) + x, B + y, i, true);
    for (Vertex x = 0; x < K; ++x) add(C(i) + x, D(i) + x, i, false);
    for (Vertex x = 0; x < K; ++x)
      for (Vertex y = 0; y < K; ++y) add(D(i) + x, E + y, i, true);
    for (Vertex x = 0; x < K; ++x) add(E + x, F(i) + x, i, true);
  }
  std::sort(out.reference_h.begin(), out.reference_h.end());
  out.graph = MultiGraph(n, max_weight, edges);
  out.capacities = Capacities::uniform(n);
  EdcsParams p;  // per class, in units of that class's weight
  p.max_weight = 1;
  p.beta = 2 * k + 1;
  p.beta_minus = 2 * k;
  out.params = p;
  return out;
}

Instance generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::random: return gen_random(spec);
    case GenKind::tight: return gen_tight(spec.k, spec.max_weight, spec.beta_minus, spec.l);
    case GenKind::multicopy: return gen_multicopy(spec.k, spec.max_weight);
  }
  throw InputError("unknown generator kind");
}

}  // namespace edcs
