#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "edcs/edcs.hpp"
#include "edcs/generators.hpp"
#include "edcs/report.hpp"
#include "edcs/stream.hpp"
#include "edcs/trials.hpp"

using namespace edcs;
using nlohmann::json;

namespace {

enum class Level { quiet, warn, info, debug };

Level log_level() {
  const char* env = std::getenv("EDCS_LOG");
  if (!env) return Level::warn;
  const std::string v = env;
  if (v == "quiet" || v == "0") return Level::quiet;
  if (v == "info" || v == "2") return Level::info;
  if (v == "debug" || v == "3") return Level::debug;
  return Level::warn;
}

void log(Level level, const std::string& msg) {
  static const Level current = log_level();
  if (level <= current && current != Level::quiet) std::cerr << "edcs: " << msg << '\n';
}

constexpr int kOk = 0;
constexpr int kGuaranteeFailed = 1;
constexpr int kInputError = 2;

struct ParamFlags {
  std::string epsilon = "0.1";
  std::optional<Weight> max_weight;
  std::optional<std::int64_t> beta;
  std::optional<std::int64_t> beta_minus;
  bool theorem = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "approximation slack, decimal or p/q")->capture_default_str();
    cmd->add_option("--W", max_weight, "weight bound for the parameters (default: the graph's W)");
    auto* b = cmd->add_option("--beta", beta, "practical beta");
    cmd->add_option("--beta-minus", beta_minus, "practical beta-minus (default beta - 2)")->needs(b);
    cmd->add_flag("--theorem-params", theorem, "derive (beta, beta-minus) from epsilon and W")->excludes(b);
  }

  EdcsParams resolve(Weight graph_w) const {
    const Weight w = max_weight.value_or(graph_w);
    if (w < graph_w) throw InputError("--W is below the graph's maximum weight");
    const Fraction eps = Fraction::parse(epsilon);
    if (!theorem && !beta) throw InputError("pass --beta (practical mode) or --theorem-params");
    EdcsParams p;
    if (theorem) {
      p = parameters_for(eps, w, ParamMode::theorem);
    } else {
      p.max_weight = w;
      p.epsilon = eps;
      p.lambda = {eps.num, eps.den * 100 * w};
      p.beta = *beta;
      p.beta_minus = beta_minus.value_or(*beta - 2);
      p.check();
    }
    return p;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string graph_text(const MultiGraph& g, const Capacities& b, std::optional<std::span<const EdgeId>> subset = {}) {
  std::ostringstream s;
  write_graph(s, g, b, subset);
  return s.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash)), hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw InputError("empty seed range " + part);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad seed list entry '" + part + "'");
    }
  }
  if (seeds.empty()) throw InputError("no seeds given");
  return seeds;
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string spec;
  std::string out;
  std::string h_out;
};

int cmd_gen(const GenArgs& a) {
  const std::string text = !a.spec.empty() && a.spec.front() == '{' ? a.spec : slurp(a.spec);
  const GenSpec spec = parse_gen_spec(text);
  const Instance inst = generate(spec);
  log(Level::info, "generated n=" + std::to_string(inst.graph.vertex_count()) +
                       " m=" + std::to_string(inst.graph.edge_count()));
  emit(a.out, graph_text(inst.graph, inst.capacities));
  if (!a.h_out.empty()) {
    if (spec.kind == GenKind::random) throw InputError("--h-out needs a tight or multicopy spec");
    emit(a.h_out, graph_text(inst.graph, inst.capacities, std::span<const EdgeId>(inst.reference_h)));
  }
  return kOk;
}

// --- build -------------------------------------------------------------------

struct BuildArgs {
  std::string graph;
  std::string out;
  std::string report;
  ParamFlags params;
};

int cmd_build(const BuildArgs& a) {
  const GraphFile file = read_graph_file(a.graph);
  const EdcsParams p = a.params.resolve(file.graph.max_weight());
  BuildOptions options;
  options.record_trace = true;
  const BuildResult result = build_wb_edcs(file.graph, file.capacities, p, options);
  const ViolationReport violations = validate(file.graph, file.capacities, result.h, p);

  std::size_t inserts = 0, removes = 0;
  for (const auto& s : result.trace) (s.kind == StepKind::insert ? inserts : removes)++;
  json report = {{"params", to_json(p)},
                 {"steps", result.steps},
                 {"insertions", inserts},
                 {"removals", removes},
                 {"potential_final", potential(result.h, file.capacities, p).str()},
                 {"min_potential_step", result.min_step ? result.min_step->str() : "none"},
                 {"potential_monotone", result.potential_monotone},
                 {"degree_cap_held", result.degree_cap_held},
                 {"h_edges", result.h.size()},
                 {"h_weight", result.h.total_weight()},
                 {"validation", to_json(violations)}};
  const auto members = result.h.members();
  emit(a.out, graph_text(file.graph, file.capacities, std::span<const EdgeId>(members)));
  if (!a.report.empty())
    emit(a.report, report.dump(2) + "\n");
  else
    std::cerr << report.dump(2) << '\n';
  return violations.clean() ? kOk : kGuaranteeFailed;
}

// --- stream ------------------------------------------------------------------

struct StreamArgs {
  std::string graph;
  std::string seeds;
  int jobs = 0;
  int variant = 1;
  std::uint64_t oracle_budget = kDefaultOracleBudget;
  std::optional<std::uint64_t> small_output_cap;
  bool no_small_output = false;
  bool no_oracle = false;
  std::optional<std::string> slack;
  bool check = false;
  std::size_t max_failures = 0;
  std::string out;
  std::string csv;
  ParamFlags params;
};

int cmd_stream(const StreamArgs& a) {
  const GraphFile file = read_graph_file(a.graph);
  TrialConfig config;
  config.params = a.params.resolve(file.graph.max_weight());
  config.epsilon = Fraction::parse(a.params.epsilon);
  config.variant = a.variant == 3 ? Variant::algorithm3 : Variant::algorithm1;
  config.options.oracle_budget = a.oracle_budget;
  config.options.small_output = !a.no_small_output;
  config.options.small_output_cap = a.small_output_cap;
  config.with_oracle = !a.no_oracle;
  if (a.slack) config.slack = Fraction::parse(*a.slack);
  std::vector<std::uint64_t> seeds;
  if (a.seeds == "as-is") {
    config.as_is = true;
    seeds = {0};
    log(Level::warn, "file order is not a random order; the guarantees do not apply");
  } else {
    seeds = parse_seeds(a.seeds);
  }
  if (config.variant == Variant::algorithm1 && !multiplicity_within_capacity(file.graph, file.capacities))
    throw InputError("graph has more than min(b_u, b_v) parallel edges between some pair; use --variant 3");

  log(Level::info, "running " + std::to_string(seeds.size()) + " seeds, beta=" + std::to_string(config.params.beta) +
                       " beta_minus=" + std::to_string(config.params.beta_minus));
  const TrialReport report = run_trials(file.graph, file.capacities, seeds, config, a.jobs);
  for (const auto& t : report.trials)
    if (!t.error.empty()) log(Level::warn, "seed " + std::to_string(t.seed) + ": " + t.error);

  emit(a.out, to_json(file.graph, report).dump(2) + "\n");
  if (!a.csv.empty()) emit(a.csv, trials_csv(report));
  if (a.check && report.failures > a.max_failures) {
    log(Level::warn, std::to_string(report.failures) + " trials below the guarantee");
    return kGuaranteeFailed;
  }
  return kOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string graph;
  std::string subgraph;
  ParamFlags params;
};

int cmd_verify(const VerifyArgs& a) {
  const GraphFile file = read_graph_file(a.graph);
  const GraphFile sub = read_graph_file(a.subgraph);
  const EdcsParams p = a.params.resolve(file.graph.max_weight());
  const std::vector<EdgeId> ids = embed_subgraph(file.graph, sub.graph);
  const Subgraph h(file.graph, ids);
  const ViolationReport report = validate(file.graph, file.capacities, h, p);
  json out = to_json(report);
  out["params"] = to_json(p);
  out["h_edges"] = h.size();
  std::cout << out.dump(2) << '\n';
  return report.clean() ? kOk : kGuaranteeFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted EDCS sparsifiers and random-order streaming b-matching"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an instance from a JSON spec");
  g->add_option("spec", gen.spec, "spec file, or inline JSON")->required();
  g->add_option("--out", gen.out, "graph output (default stdout)");
  g->add_option("--h-out", gen.h_out, "reference subgraph output (tight/multicopy)");

  BuildArgs build;
  auto* b = app.add_subcommand("build", "build a w-b-EDCS offline");
  b->add_option("graph", build.graph)->required();
  b->add_option("--out", build.out, "subgraph output (default stdout)");
  b->add_option("--report", build.report, "JSON report (default stderr)");
  build.params.attach(b);

  StreamArgs stream;
  auto* s = app.add_subcommand("stream", "run seeded random-order stream trials");
  s->add_option("graph", stream.graph)->required();
  s->add_option("--seed,--seeds", stream.seeds, "seed list such as 1-100,250, or as-is")->required();
  s->add_option("--jobs", stream.jobs, "worker threads (0 = all cores)");
  s->add_option("--variant", stream.variant, "1 or 3")->check(CLI::IsMember({1, 3}));
  s->add_option("--oracle-budget", stream.oracle_budget, "branch-and-bound node limit")->capture_default_str();
  s->add_option("--small-output-cap", stream.small_output_cap, "override the auxiliary store cap");
  s->add_flag("--no-small-output", stream.no_small_output, "disable the small-output fallback");
  s->add_flag("--no-oracle", stream.no_oracle, "skip the exact optimum");
  s->add_option("--slack", stream.slack, "bound 1/(2 - 1/(2W) + slack); default epsilon");
  s->add_flag("--check", stream.check, "exit 1 when more than --max-failures trials miss the bound");
  s->add_option("--max-failures", stream.max_failures);
  s->add_option("--out", stream.out, "JSON report (default stdout)");
  s->add_option("--csv", stream.csv, "per-seed CSV");
  stream.params.attach(s);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "check a subgraph against both EDCS properties");
  v->add_option("graph", verify.graph)->required();
  v->add_option("subgraph", verify.subgraph)->required();
  verify.params.attach(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*b) return cmd_build(build);
    if (*s) return cmd_stream(stream);
    if (*v) return cmd_verify(verify);
  } catch (const InputError& e) {
    std::cerr << "edcs: " << e.what() << '\n';
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "edcs: " << e.what() << '\n';
    return kInputError;
  } catch (const OracleBudgetExceeded& e) {
    std::cerr << "edcs: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
