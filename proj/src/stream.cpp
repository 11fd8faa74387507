#include "edcs/stream.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace edcs {

using boost::multiprecision::cpp_int;

EdgeStream::EdgeStream(const MultiGraph& source, std::vector<EdgeId> order)
    : source_(&source), order_(std::move(order)) {
  if (order_.size() != source.edge_count()) throw PreconditionError("stream order must list every edge once");
  std::vector<std::uint8_t> seen(order_.size(), 0);
  for (EdgeId id : order_) {
    if (id >= order_.size() || seen[id]) throw PreconditionError("stream order is not a permutation");
    seen[id] = 1;
  }
}

EdgeStream make_stream(const MultiGraph& g, std::uint64_t seed) {
  std::vector<EdgeId> order = g.all_edge_ids();
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return EdgeStream(g, std::move(order));
}

EdgeStream make_stream_as_is(const MultiGraph& g) { return EdgeStream(g, g.all_edge_ids()); }

bool is_underfull(const Subgraph& h, const Capacities& b, const WeightedEdge& e, const EdcsParams& p) {
  return compare_edge_degree(h, b, e, p.beta_minus) < 0;
}

const char* to_string(Fallback f) {
  switch (f) {
    case Fallback::none: return "none";
    case Fallback::small_output: return "small_output";
    case Fallback::alpha_zero: return "alpha_zero";
  }
  return "?";
}

const char* to_string(Extraction e) { return e == Extraction::exact ? "exact" : "greedy"; }

std::size_t guess_levels(std::size_t m) {
  std::size_t levels = 0;
  while (m > 0) {
    ++levels;
    m >>= 1;
  }
  return levels;
}

namespace {

cpp_int epochs_at(const EdcsParams& p, std::size_t level) {
  cpp_int e = cpp_int(1) << (level + 2);
  return e * p.beta * p.beta * p.max_weight * p.max_weight + 1;
}

std::uint64_t saturate(const cpp_int& x) {
  if (x > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return x.convert_to<std::uint64_t>();
}

}  // namespace

std::uint64_t interval_size(std::size_t m, Fraction epsilon, const EdcsParams& p, std::size_t level) {
  if (m == 0) return 0;
  const cpp_int denom = cpp_int(epsilon.den) * guess_levels(m) * epochs_at(p, level);
  return saturate(cpp_int(epsilon.num) * m / denom);
}

std::uint64_t default_small_output_cap(std::size_t n, Weight max_weight, Fraction epsilon, std::size_t m) {
  // 2n · 3W²/(2ε²) · ln m  =  3nW² · den²/num² · ln m
  const double log_m = std::log(static_cast<double>(std::max<std::size_t>(m, 2)));
  const double eps = epsilon.value();
  const double cap = 3.0 * static_cast<double>(n) * static_cast<double>(max_weight * max_weight) / (eps * eps) * log_m;
  if (cap >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(cap));
}

BMatching extract_matching(const MultiGraph& g, const Capacities& b, std::span<const EdgeId> subset,
                           std::uint64_t budget, Extraction& used) {
  try {
    auto m = max_weight_b_matching_exact(g, b, subset, budget);
    used = Extraction::exact;
    return m;
  } catch (const OracleBudgetExceeded&) {
    used = Extraction::greedy;
    return max_weight_b_matching_greedy(g, b, subset);
  }
}

namespace {

// Keeps, per vertex pair, the min(b_u, b_v) heaviest edges seen so far (ties to smaller id)
// until the total exceeds the cap.
class RelevantStore {
 public:
  RelevantStore(const Capacities& b, std::uint64_t cap, bool enabled) : b_(b), cap_(cap), alive_(enabled) {}

  void observe(const WeightedEdge& e) {
    if (!alive_) return;
    auto& pair = pairs_[{std::min(e.u, e.v), std::max(e.u, e.v)}];
    if (static_cast<std::int64_t>(pair.size()) < b_.pair_limit(e.u, e.v)) {
      pair.push_back(e);
      if (++size_ > cap_) {
        alive_ = false;
        overflowed_ = true;
        pairs_.clear();
        size_ = 0;
      }
      return;
    }
    auto lightest = pair.begin();
    for (auto it = pair.begin(); it != pair.end(); ++it)
      if (it->w < lightest->w || (it->w == lightest->w && it->id > lightest->id)) lightest = it;
    if (e.w > lightest->w || (e.w == lightest->w && e.id < lightest->id)) *lightest = e;
  }

  bool usable() const { return alive_; }
  bool overflowed() const { return overflowed_; }
  std::size_t size() const { return size_; }

  std::vector<EdgeId> members() const {
    std::vector<EdgeId> ids;
    for (const auto& [key, edges] : pairs_)
      for (const auto& e : edges) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

 private:
  const Capacities& b_;
  std::uint64_t cap_;
  bool alive_;
  bool overflowed_ = false;
  std::size_t size_ = 0;
  std::map<std::pair<Vertex, Vertex>, std::vector<WeightedEdge>> pairs_;
};

class Engine {
 public:
  Engine(Variant variant, EdgeStream& stream, const Capacities& b, const EdcsParams& p, Fraction epsilon,
         const StreamOptions& options)
      : variant_(variant), stream_(stream), g_(stream.source()), b_(b), p_(p), eps_(epsilon), options_(options),
        result_{Subgraph(g_), {}, {}, {}, {}},
        store_(b, cap_for(options, g_, epsilon), options.small_output) {}

  StreamResult run() {
    p_.check();
    if (b_.size() != g_.vertex_count()) throw PreconditionError("capacity vector size differs from vertex count");
    if (eps_.num <= 0 || eps_.num >= eps_.den) throw PreconditionError("epsilon must lie in (0, 1)");
    if (variant_ == Variant::algorithm1 && !multiplicity_within_capacity(g_, b_))
      throw PreconditionError("more than min(b_u, b_v) parallel edges between some pair; use algorithm 3");
    stream_.rewind();

    auto& st = result_.stats;
    const std::size_t m = stream_.length();
    st.m = m;
    st.phase1_budget = static_cast<std::size_t>((static_cast<__int128>(eps_.num) * m + eps_.den - 1) / eps_.den);
    st.small_output_cap = options_.small_output ? cap_for(options_, g_, eps_) : 0;
    if (m == 0) {
      st.fallback_used = options_.small_output ? Fallback::small_output : Fallback::none;
      return std::move(result_);
    }

    bool alpha_zero = false;
    const std::size_t levels = guess_levels(m);
    for (std::size_t i = 0; i < levels; ++i) {
      st.final_guess_i = static_cast<std::int64_t>(i);
      const std::uint64_t alpha = options_.interval_override ? *options_.interval_override : interval_size(m, eps_, p_, i);
      if (alpha == 0) {
        alpha_zero = true;
        break;
      }
      const std::uint64_t epochs = saturate(epochs_at(p_, i));
      bool process_stopped = false;
      for (std::uint64_t epoch = 0; epoch < epochs && !stream_.done(); ++epoch) {
        ++st.epoch_count;
        bool found_underfull = false;
        for (std::uint64_t j = 0; j < alpha && !stream_.done(); ++j) {
          const WeightedEdge& e = stream_.next();
          ++st.phase1_edges_consumed;
          store_.observe(e);
          if (phase1(e)) found_underfull = true;
          account();
        }
        if (!found_underfull) {
          process_stopped = true;
          break;
        }
      }
      if (process_stopped) {
        st.process_stopped = true;
        break;
      }
    }

    while (!stream_.done()) {
      const WeightedEdge& e = stream_.next();
      store_.observe(e);
      if (alpha_zero)
        result_.stored.push_back(e.id);
      else if (phase2_underfull(e))
        result_.x.push_back(e.id);
      account();
    }

    st.h_size = result_.h.size();
    st.underfull_collected = result_.x.size();
    st.late_stored = result_.stored.size();
    st.small_output_overflowed = store_.overflowed();

    std::vector<EdgeId> pool;
    if (store_.usable()) {
      st.fallback_used = Fallback::small_output;
      pool = store_.members();
    } else {
      st.fallback_used = alpha_zero ? Fallback::alpha_zero : Fallback::none;
      pool = result_.h.members();
      pool.insert(pool.end(), result_.x.begin(), result_.x.end());
      pool.insert(pool.end(), result_.stored.begin(), result_.stored.end());
      std::sort(pool.begin(), pool.end());
    }
    result_.matching = extract_matching(g_, b_, pool, options_.oracle_budget, st.extraction);
    st.result_weight = result_.matching.weight;
    return std::move(result_);
  }

 private:
  static std::uint64_t cap_for(const StreamOptions& o, const MultiGraph& g, Fraction eps) {
    if (o.small_output_cap) return *o.small_output_cap;
    return default_small_output_cap(g.vertex_count(), g.max_weight(), eps, g.edge_count());
  }

  void account() {
    const std::size_t now = result_.h.size() + result_.x.size() + result_.stored.size() + store_.size();
    result_.stats.peak_stored_edges = std::max(result_.stats.peak_stored_edges, now);
  }

  // H-edges parallel to e, and the lightest of them (ties to smaller id).
  std::pair<std::int64_t, EdgeId> pair_load(const WeightedEdge& e) const {
    const Subgraph& h = result_.h;
    std::int64_t count = 0;
    EdgeId lightest = kNoEdge;
    for (EdgeId id : h.incident(e.u)) {
      const auto& f = g_.edge(id);
      if (f.other(e.u) != e.v) continue;
      ++count;
      if (lightest == kNoEdge || f.w < g_.edge(lightest).w || (f.w == g_.edge(lightest).w && id < lightest))
        lightest = id;
    }
    return {count, lightest};
  }

  bool phase1(const WeightedEdge& e) {
    Subgraph& h = result_.h;
    auto& st = result_.stats;
    if (!is_underfull(h, b_, e, p_)) return false;
    if (variant_ == Variant::algorithm3) {
      const auto [count, lightest] = pair_load(e);
      if (count == b_.pair_limit(e.u, e.v)) {
        const auto& old = g_.edge(lightest);
        if (e.w <= old.w) return false;  // irrelevant
        const auto out = potential_step(h, b_, p_, old, -1);
        h.erase(old.id);
        const auto in = potential_step(h, b_, p_, e, +1);
        // both steps share the scale b_u·b_v
        if (out.scaled_delta + in.scaled_delta < static_cast<__int128>(out.scale)) st.replacement_potential_ok = false;
        ++st.replacements;
      }
    }
    h.insert(e.id);
    ++st.insertions;
    repair(e);
    if (options_.check_invariants && !degree_bounded()) st.bounded_degree_held = false;
    return true;
  }

  // Removes Property (i) violators at e's endpoints, smallest id first.
  void repair(const WeightedEdge& e) {
    Subgraph& h = result_.h;
    while (true) {
      EdgeId worst = kNoEdge;
      for (Vertex x : {e.u, e.v})
        for (EdgeId id : h.incident(x))
          if (id < worst && compare_edge_degree(h, b_, g_.edge(id), p_.beta) > 0) worst = id;
      if (worst == kNoEdge) return;
      h.erase(worst);
      ++result_.stats.removals;
    }
  }

  bool phase2_underfull(const WeightedEdge& e) const {
    if (variant_ == Variant::algorithm1) return is_underfull(result_.h, b_, e, p_);
    const auto [count, lightest] = pair_load(e);
    if (count < b_.pair_limit(e.u, e.v)) return is_underfull(result_.h, b_, e, p_);
    return g_.edge(lightest).w < e.w;
  }

  bool degree_bounded() const {
    const Subgraph& h = result_.h;
    for (EdgeId id : h.members()) {
      const auto& e = g_.edge(id);
      if (compare_edge_degree(h, b_, e, p_.beta) > 0) return false;
      if (pair_load(e).first > b_.pair_limit(e.u, e.v)) return false;
    }
    return true;
  }

  Variant variant_;
  EdgeStream& stream_;
  const MultiGraph& g_;
  const Capacities& b_;
  EdcsParams p_;
  Fraction eps_;
  StreamOptions options_;
  StreamResult result_;
  RelevantStore store_;
};

}  // namespace

StreamResult run_stream(Variant variant, EdgeStream& stream, const Capacities& b, const EdcsParams& p,
                        Fraction epsilon, const StreamOptions& options) {
  return Engine(variant, stream, b, p, epsilon, options).run();
}

StreamResult run_algorithm1(EdgeStream& stream, const Capacities& b, const EdcsParams& p, Fraction epsilon,
                            const StreamOptions& options) {
  return run_stream(Variant::algorithm1, stream, b, p, epsilon, options);
}

StreamResult run_algorithm3(EdgeStream& stream, const Capacities& b, const EdcsParams& p, Fraction epsilon,
                            const StreamOptions& options) {
  return run_stream(Variant::algorithm3, stream, b, p, epsilon, options);
}

}  // namespace edcs
