#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edcs/edcs.hpp"

namespace edcs {

enum class GenKind { random, tight, multicopy };

struct GenSpec {
  GenKind kind = GenKind::random;
  // random
  std::size_t n = 0;
  std::size_t m = 0;
  Weight max_weight = 1;
  std::int64_t b_min = 1;
  std::int64_t b_max = 1;
  std::uint64_t seed = 0;
  bool bipartite = false;
  bool raw_multiplicity = false;  // skip the min(b_u, b_v) multiplicity cap
  // tight / multicopy
  std::int64_t k = 1;
  std::optional<std::int64_t> l;           // tight: defaults to 2kW − k + 1
  std::optional<std::int64_t> beta_minus;  // tight: must equal 2kW
};

/// Parses the JSON config, e.g. {"kind":"tight","k":2,"W":1}. Throws InputError.
GenSpec parse_gen_spec(const std::string& json_text);

struct Instance {
  MultiGraph graph;
  Capacities capacities;
  std::vector<EdgeId> reference_h;  // tight / multicopy only
  std::optional<EdcsParams> params; // parameters the reference H is built for
  // multicopy: edges of each weight class i (index i−1) and that class's EDCS part
  std::vector<std::vector<EdgeId>> class_edges;
  std::vector<std::vector<EdgeId>> class_h;
};

/// Seeded random multigraph; weights uniform in [1, W], capacities uniform in
/// [b_min, b_max]. Bipartite graphs put vertices [0, n/2) on the left.
/// Throws InputError when m exceeds the available pair capacity.
Instance gen_random(const GenSpec& spec);

/// Tight family: groups a, b, e, f of size k and c, d of size l, numbered in that order.
/// Solid edges (weight W) a–b and e–f matchings, b–c and d–e complete; dashed c–d
/// matching of weight 1 is left out of H. Edge order: b–c, a–b, d–e, e–f, c–d.
Instance gen_tight(std::int64_t k, Weight max_weight, std::optional<std::int64_t> beta_minus = std::nullopt,
                   std::optional<std::int64_t> l = std::nullopt);

/// Multi-copy family: shared groups B and E of size k; per class i ∈ [1, W] groups
/// A_i, C_i, D_i, F_i of size k with weight-i edges A_i–B and E–F_i matchings,
/// C_i–B and D_i–E complete, and the dashed C_i–D_i matching outside H.
/// Vertex order: A_1..A_W, B, C_1..C_W, D_1..D_W, E, F_1..F_W.
Instance gen_multicopy(std::int64_t k, Weight max_weight);

Instance generate(const GenSpec& spec);

}  // namespace edcs
