#include "edcs/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace edcs {

namespace {

std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

Fraction Fraction::parse(const std::string& text) {
  auto fail = [&] { return InputError("not a rational number: '" + text + "'"); };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Fraction f;
    auto s1 = text.substr(0, slash), s2 = text.substr(slash + 1);
    auto r1 = std::from_chars(s1.data(), s1.data() + s1.size(), f.num);
    auto r2 = std::from_chars(s2.data(), s2.data() + s2.size(), f.den);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != s1.data() + s1.size() ||
        r2.ptr != s2.data() + s2.size() || f.den <= 0)
      throw fail();
    auto g = std::gcd(f.num, f.den);
    return {f.num / g, f.den / g};
  }
  std::int64_t num = 0, den = 1;
  bool seen_digit = false, seen_dot = false;
  for (char c : text) {
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 || (seen_dot && den > 1'000'000'000'000LL))
        throw fail();
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  auto g = std::gcd(num, den);
  return {num / g, den / g};
}

MultiGraph::MultiGraph(std::size_t n, Weight max_weight, std::span<const EdgeSpec> edges)
    : max_weight_(max_weight), adjacency_(n) {
  if (max_weight < 1) throw InputError("weight cap W must be >= 1");
  if (edges.size() >= kNoEdge) throw InputError("too many edges");
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    const auto id = static_cast<EdgeId>(edges_.size());
    if (e.u >= n || e.v >= n)
      throw InputError("edge " + std::to_string(id) + " has an endpoint outside [0, n)");
    if (e.u == e.v) throw InputError("edge " + std::to_string(id) + " is a self-loop");
    if (e.w < 1 || e.w > max_weight)
      throw InputError("edge " + std::to_string(id) + " weight outside [1, W]");
    edges_.push_back({id, e.u, e.v, e.w});
    adjacency_[e.u].push_back(id);
    adjacency_[e.v].push_back(id);
  }
}

bool MultiGraph::is_simple() const {
  std::unordered_map<std::uint64_t, int> seen;
  seen.reserve(edges_.size());
  for (const auto& e : edges_)
    if (++seen[pair_key(e.u, e.v)] > 1) return false;
  return true;
}

std::optional<std::vector<std::uint8_t>> MultiGraph::bipartition(std::span<const EdgeId> subset) const {
  const std::size_t n = vertex_count();
  std::vector<std::vector<Vertex>> nbr(n);
  for (EdgeId id : subset) {
    const auto& e = edges_.at(id);
    nbr[e.u].push_back(e.v);
    nbr[e.v].push_back(e.u);
  }
  std::vector<std::uint8_t> side(n, 2);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (side[s] != 2) continue;
    side[s] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : nbr[x]) {
        if (side[y] == 2) {
          side[y] = static_cast<std::uint8_t>(1 - side[x]);
          stack.push_back(y);
        } else if (side[y] == side[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

std::optional<std::vector<std::uint8_t>> MultiGraph::bipartition() const {
  return bipartition(all_edge_ids());
}

std::vector<EdgeId> MultiGraph::all_edge_ids() const {
  std::vector<EdgeId> ids(edges_.size());
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  return ids;
}

Capacities::Capacities(std::vector<std::int64_t> b) : b_(std::move(b)) {
  for (std::size_t v = 0; v < b_.size(); ++v)
    if (b_[v] < 1) throw InputError("capacity of vertex " + std::to_string(v) + " must be >= 1");
}

Capacities Capacities::uniform(std::size_t n, std::int64_t value) {
  return Capacities(std::vector<std::int64_t>(n, value));
}

bool multiplicity_within_capacity(const MultiGraph& g, const Capacities& b) {
  std::unordered_map<std::uint64_t, std::int64_t> count;
  for (const auto& e : g.edges())
    if (++count[pair_key(e.u, e.v)] > b.pair_limit(e.u, e.v)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Subgraph::Subgraph(const MultiGraph& parent)
    : parent_(&parent),
      member_(parent.edge_count(), 0),
      wdeg_(parent.vertex_count(), 0),
      incident_(parent.vertex_count()),
      slot_u_(parent.edge_count(), 0),
      slot_v_(parent.edge_count(), 0) {}

Subgraph::Subgraph(const MultiGraph& parent, std::span<const EdgeId> members) : Subgraph(parent) {
  for (EdgeId id : members) insert(id);
}

void Subgraph::insert(EdgeId id) {
  const auto& e = parent_->edge(id);
  if (member_[id]) throw PreconditionError("edge " + std::to_string(id) + " already in subgraph");
  member_[id] = 1;
  slot_u_[id] = static_cast<std::uint32_t>(incident_[e.u].size());
  incident_[e.u].push_back(id);
  slot_v_[id] = static_cast<std::uint32_t>(incident_[e.v].size());
  incident_[e.v].push_back(id);
  wdeg_[e.u] += e.w;
  wdeg_[e.v] += e.w;
  ++size_;
}

void Subgraph::detach(Vertex x, EdgeId id) {
  const auto& e = parent_->edge(id);
  auto& list = incident_[x];
  const std::uint32_t slot = (x == e.u) ? slot_u_[id] : slot_v_[id];
  const EdgeId moved = list.back();
  list[slot] = moved;
  list.pop_back();
  if (moved != id) {
    const auto& me = parent_->edge(moved);
    if (me.u == x)
      slot_u_[moved] = slot;
    else
      slot_v_[moved] = slot;
  }
}

void Subgraph::erase(EdgeId id) {
  const auto& e = parent_->edge(id);
  if (!member_[id]) throw PreconditionError("edge " + std::to_string(id) + " not in subgraph");
  detach(e.u, id);
  detach(e.v, id);
  member_[id] = 0;
  wdeg_[e.u] -= e.w;
  wdeg_[e.v] -= e.w;
  --size_;
}

void Subgraph::clear() {
  for (EdgeId id : members()) erase(id);
}

Weight Subgraph::weighted_degree(Vertex v) const { return wdeg_.at(v); }

std::size_t Subgraph::degree(Vertex v) const { return incident_.at(v).size(); }

std::vector<EdgeId> Subgraph::members() const {
  std::vector<EdgeId> out;
  out.reserve(size_);
  for (EdgeId id = 0; id < member_.size(); ++id)
    if (member_[id]) out.push_back(id);
  return out;
}

Weight Subgraph::total_weight() const {
  Weight total = 0;
  for (EdgeId id : members()) total += parent_->edge(id).w;
  return total;
}

bool Subgraph::cache_consistent() const {
  std::vector<Weight> wdeg(wdeg_.size(), 0);
  std::vector<std::size_t> deg(wdeg_.size(), 0);
  std::size_t count = 0;
  for (EdgeId id = 0; id < member_.size(); ++id) {
    if (!member_[id]) continue;
    const auto& e = parent_->edge(id);
    wdeg[e.u] += e.w;
    wdeg[e.v] += e.w;
    ++deg[e.u];
    ++deg[e.v];
    ++count;
  }
  if (count != size_) return false;
  for (std::size_t v = 0; v < wdeg.size(); ++v)
    if (wdeg[v] != wdeg_[v] || deg[v] != incident_[v].size()) return false;
  return true;
}

Weight weighted_degree(const Subgraph& h, Vertex v) { return h.weighted_degree(v); }

Subgraph relevant_subgraph(const MultiGraph& g, const Capacities& b) {
  std::map<std::uint64_t, std::vector<EdgeId>> by_pair;
  for (const auto& e : g.edges()) by_pair[pair_key(e.u, e.v)].push_back(e.id);
  Subgraph out(g);
  for (auto& [key, ids] : by_pair) {
    std::sort(ids.begin(), ids.end(), [&](EdgeId a, EdgeId c) {
      const auto wa = g.edge(a).w, wc = g.edge(c).w;
      return wa != wc ? wa > wc : a < c;
    });
    const auto& first = g.edge(ids.front());
    const auto keep = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(b.pair_limit(first.u, first.v)));
    for (std::size_t i = 0; i < keep; ++i) out.insert(ids[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

template <typename T>
T parse_number(const std::string& tok, std::size_t line, const char* what) {
  T value{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw InputError(std::string("bad ") + what + " '" + tok + "'", line);
  return value;
}

}  // namespace

GraphFile read_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0, m = 0;
  Weight cap = 1;
  std::vector<std::int64_t> b;
  std::vector<EdgeSpec> edges;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string& kind = tok[0];
    if (kind == "g") {
      if (have_header) throw InputError("duplicate header", line_no);
      if (tok.size() != 4) throw InputError("header must be 'g <n> <m> <W>'", line_no);
      n = parse_number<std::size_t>(tok[1], line_no, "vertex count");
      m = parse_number<std::size_t>(tok[2], line_no, "edge count");
      cap = parse_number<Weight>(tok[3], line_no, "weight cap");
      if (cap < 1) throw InputError("weight cap must be >= 1", line_no);
      b.assign(n, 1);
      edges.reserve(m);
      have_header = true;
    } else if (!have_header) {
      throw InputError("expected header 'g <n> <m> <W>' first", line_no);
    } else if (kind == "b") {
      if (tok.size() != 3) throw InputError("capacity line must be 'b <v> <b_v>'", line_no);
      auto v = parse_number<std::size_t>(tok[1], line_no, "vertex");
      auto bv = parse_number<std::int64_t>(tok[2], line_no, "capacity");
      if (v >= n) throw InputError("vertex out of range", line_no);
      if (bv < 1) throw InputError("capacity must be >= 1", line_no);
      b[v] = bv;
    } else if (kind == "e") {
      if (tok.size() != 4) throw InputError("edge line must be 'e <u> <v> <w>'", line_no);
      auto u = parse_number<std::size_t>(tok[1], line_no, "vertex");
      auto v = parse_number<std::size_t>(tok[2], line_no, "vertex");
      auto w = parse_number<Weight>(tok[3], line_no, "weight");
      if (u >= n || v >= n) throw InputError("vertex out of range", line_no);
      if (u == v) throw InputError("self-loop", line_no);
      if (w < 1 || w > cap) throw InputError("weight outside [1, W]", line_no);
      if (edges.size() == m) throw InputError("more edges than declared in header", line_no);
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
    } else {
      throw InputError("unknown line type '" + kind + "'", line_no);
    }
  }
  if (!have_header) throw InputError("missing header 'g <n> <m> <W>'", line_no);
  if (edges.size() != m)
    throw InputError("header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()),
                     line_no);
  return {MultiGraph(n, cap, edges), Capacities(std::move(b))};
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const MultiGraph& g, const Capacities& b,
                 std::optional<std::span<const EdgeId>> subset) {
  const std::size_t m = subset ? subset->size() : g.edge_count();
  out << "g " << g.vertex_count() << ' ' << m << ' ' << g.max_weight() << '\n';
  for (Vertex v = 0; v < b.size(); ++v)
    if (b[v] != 1) out << "b " << v << ' ' << b[v] << '\n';
  auto emit = [&](const WeightedEdge& e) { out << "e " << e.u << ' ' << e.v << ' ' << e.w << '\n'; };
  if (subset)
    for (EdgeId id : *subset) emit(g.edge(id));
  else
    for (const auto& e : g.edges()) emit(e);
}

LabeledGraph ingest_labeled_edges(std::istream& in, Weight max_weight) {
  std::unordered_map<std::string, Vertex> index;
  LabeledGraph out;
  std::vector<EdgeSpec> edges;
  auto lookup = [&](const std::string& label) {
    auto [it, fresh] = index.try_emplace(label, static_cast<Vertex>(out.labels.size()));
    if (fresh) out.labels.push_back(label);
    return it->second;
  };
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string a, c, wtok;
    if (!(ls >> a)) continue;
    if (!(ls >> c >> wtok)) throw InputError("expected '<label> <label> <weight>'", line_no);
    const auto w = parse_number<Weight>(wtok, line_no, "weight");
    if (a == c) throw InputError("self-loop", line_no);
    if (w < 1 || w > max_weight) throw InputError("weight outside [1, W]", line_no);
    const Vertex u = lookup(a);
    const Vertex v = lookup(c);
    edges.push_back({u, v, w});
  }
  out.graph = MultiGraph(out.labels.size(), max_weight, edges);
  return out;
}

std::vector<EdgeId> embed_subgraph(const MultiGraph& g, const MultiGraph& sub) {
  if (sub.vertex_count() != g.vertex_count())
    throw InputError("subgraph has " + std::to_string(sub.vertex_count()) + " vertices, graph has " +
                     std::to_string(g.vertex_count()));
  std::map<std::tuple<Vertex, Vertex, Weight>, std::vector<EdgeId>> pool;
  for (auto it = g.edges().rbegin(); it != g.edges().rend(); ++it)
    pool[{std::min(it->u, it->v), std::max(it->u, it->v), it->w}].push_back(it->id);
  std::vector<EdgeId> out;
  out.reserve(sub.edge_count());
  for (const auto& e : sub.edges()) {
    auto found = pool.find({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
    if (found == pool.end() || found->second.empty())
      throw InputError("subgraph edge " + std::to_string(e.id) + " (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + "," + std::to_string(e.w) + ") is not an unused edge of the graph");
    out.push_back(found->second.back());
    found->second.pop_back();
  }
  return out;
}

}  // namespace edcs
