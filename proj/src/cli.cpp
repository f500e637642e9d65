#include "hopim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "hopim/analysis.hpp"
#include "hopim/bounds.hpp"
#include "hopim/error.hpp"
#include "hopim/graph.hpp"
#include "hopim/oracle.hpp"
#include "hopim/rng.hpp"
#include "hopim/selection.hpp"

namespace hopim::cli {

namespace {

using nlohmann::json;

struct GraphOptions {
  std::string path;
  std::string synthetic;  // "n,m,gamma" (bench only)
  std::string model = "wc";
  double scale = 1.0;
  std::size_t num_nodes = 0;
  bool compact_ids = false;
};

struct CommonOptions {
  std::string diffusion = "ic";
  int workers = 0;
  std::optional<std::uint64_t> rng_seed;
  std::string format = "json";
  std::string out_path;
};

struct SelectOptions {
  std::string algo = "twohop";
  std::size_t k = 0;
  int hops = 0;
  double dd_p = 0.01;
  std::string degree = "out";
};

struct EvaluateOptions {
  std::string seeds_path;
  std::size_t sims = 10000;
  std::string hop_limit = "inf";
};

struct BenchOptions {
  std::vector<std::string> algos{"onehop", "twohop", "twohop-o", "highdegree", "degreediscount"};
  std::vector<std::size_t> ks{10};
  std::vector<double> scales{1.0};
  std::size_t sims = 1000;
};

Diffusion parse_diffusion(const std::string& s) {
  if (s == "ic") return Diffusion::ic;
  if (s == "lt") return Diffusion::lt;
  throw ConfigError("unknown diffusion model '" + s + "' (expected ic|lt)");
}

int parse_hop_limit(const std::string& s) {
  if (s == "inf" || s == "unlimited") return kUnlimitedHops;
  try {
    std::size_t used = 0;
    const int h = std::stoi(s, &used);
    if (used == s.size() && h >= 0) return h;
  } catch (const std::exception&) {
  }
  throw ConfigError("hop limit must be a non-negative integer or 'inf'");
}

json hop_limit_json(int h) { return h == kUnlimitedHops ? json("inf") : json(h); }

Graph load_graph(const GraphOptions& g, double scale, std::uint64_t rng_seed) {
  Graph base;
  if (!g.synthetic.empty()) {
    PowerLawOptions pl;
    char c1 = 0, c2 = 0;
    std::istringstream is(g.synthetic);
    if (!(is >> pl.nodes >> c1 >> pl.edges >> c2 >> pl.gamma) || c1 != ',' || c2 != ',') {
      throw ConfigError("--synthetic expects n,m,gamma");
    }
    pl.seed = rng_seed;
    base = generate_power_law(pl);
  } else {
    if (g.path.empty()) throw ConfigError("--graph is required");
    base = load_edge_list_file(g.path, {g.num_nodes, g.compact_ids});
  }
  return apply_weight_model(base, WeightModel::parse(g.model, scale));
}

json ids_json(const Graph& g, const std::vector<NodeId>& seeds) {
  json arr = json::array();
  for (NodeId s : seeds) arr.push_back(g.original_id(s));
  return arr;
}

std::vector<NodeId> read_seeds(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open seeds file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<std::uint64_t> raw;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed seeds JSON: ") + e.what());
    }
    const json& list = doc.is_object() ? doc.at("seeds") : doc;
    if (!list.is_array()) throw DataError("seeds JSON must be a list of node ids");
    for (const auto& v : list) {
      if (!v.is_number_unsigned()) throw DataError("seed ids must be non-negative integers");
      raw.push_back(v.get<std::uint64_t>());
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      try {
        std::size_t used = 0;
        const auto end = line.find_last_not_of(" \t\r");
        raw.push_back(std::stoull(line.substr(b, end - b + 1), &used));
        if (used != end - b + 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError("malformed seed id at line " + std::to_string(lineno));
      }
    }
  }
  std::vector<NodeId> seeds;
  for (auto id : raw) seeds.push_back(g.internal_id(id));
  return seeds;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::uint64_t resolve_seed(const CommonOptions& c) { return c.rng_seed ? *c.rng_seed : rng::entropy_seed(); }

void check_format(const std::string& f) {
  if (f != "json" && f != "csv") throw ConfigError("unknown format '" + f + "' (expected json|csv)");
}

struct AlgoSpec {
  enum Kind { hop, highdegree, degreediscount } kind;
  HopConfig hop_cfg;
  Bootstrap bootstrap = Bootstrap::none;
};

AlgoSpec parse_algo(const std::string& algo, int hops, Diffusion diffusion) {
  AlgoSpec spec{AlgoSpec::hop, {diffusion, 2, 1024}, Bootstrap::none};
  if (algo == "onehop") {
    if (hops != 0 && hops != 1) throw ConfigError("onehop requires --hops 1");
    spec.hop_cfg.hops = 1;
    spec.bootstrap = diffusion == Diffusion::ic ? Bootstrap::upper_bounds : Bootstrap::none;
  } else if (algo == "twohop" || algo == "twohop-o") {
    if (hops != 0 && hops != 2) throw ConfigError(algo + " requires --hops 2");
    spec.hop_cfg.hops = 2;
    spec.bootstrap = algo == "twohop" ? Bootstrap::upper_bounds : Bootstrap::none;
    if (spec.bootstrap == Bootstrap::upper_bounds && diffusion == Diffusion::lt) {
      throw ConfigError("twohop uses IC upper bounds; use twohop-o with --diffusion lt");
    }
  } else if (algo == "highdegree") {
    spec.kind = AlgoSpec::highdegree;
  } else if (algo == "degreediscount") {
    spec.kind = AlgoSpec::degreediscount;
  } else {
    throw ConfigError("unknown algorithm '" + algo + "'");
  }
  return spec;
}

DegreeKind parse_degree(const std::string& s) {
  if (s == "out") return DegreeKind::out;
  if (s == "in") return DegreeKind::in;
  if (s == "total") return DegreeKind::total;
  throw ConfigError("unknown degree kind '" + s + "' (expected out|in|total)");
}

SeedResult run_algo(const Graph& g, const AlgoSpec& spec, std::size_t k, int workers, double dd_p,
                    DegreeKind degree) {
  switch (spec.kind) {
    case AlgoSpec::hop:
      return greedy_celf(g, spec.hop_cfg, k, spec.bootstrap, workers);
    case AlgoSpec::highdegree:
      return high_degree(g, k, degree);
    case AlgoSpec::degreediscount:
      return degree_discount(g, k, dd_p);
  }
  throw ConfigError("unreachable algorithm kind");
}

void add_graph_options(CLI::App* cmd, GraphOptions& g, bool allow_synthetic) {
  cmd->add_option("--graph", g.path, "Edge-list file (\"u v [p]\" per line)");
  if (allow_synthetic) {
    cmd->add_option("--synthetic", g.synthetic, "Generate a power-law graph: n,m,gamma");
  }
  cmd->add_option("--model", g.model, "Edge probabilities: wc | tri:<seed> | uniform:<p> | file");
  cmd->add_option("--scale", g.scale, "Multiply all probabilities by this factor (clamped to 1)");
  cmd->add_option("--num-nodes", g.num_nodes, "Force at least this many nodes");
  cmd->add_flag("--compact-ids", g.compact_ids, "Densify sparse node ids");
}

void add_common_options(CLI::App* cmd, CommonOptions& c, bool with_format) {
  cmd->add_option("--diffusion", c.diffusion, "Diffusion model: ic | lt");
  cmd->add_option("--workers", c.workers, "OpenMP worker threads (0 = all)");
  cmd->add_option("--rng-seed", c.rng_seed, "Seed for randomized steps (default: system entropy)");
  if (with_format) cmd->add_option("--format", c.format, "Output format: json | csv");
  cmd->add_option("--out", c.out_path, "Write output to this file instead of stdout");
}

int cmd_select(const GraphOptions& go, const CommonOptions& co, const SelectOptions& so, std::ostream& out) {
  check_format(co.format);
  const Diffusion diffusion = parse_diffusion(co.diffusion);
  const AlgoSpec spec = parse_algo(so.algo, so.hops, diffusion);
  const DegreeKind degree = parse_degree(so.degree);
  if (so.k == 0) throw ConfigError("--k must be at least 1");
  const std::uint64_t seed = resolve_seed(co);
  const Graph g = load_graph(go, go.scale, seed);
  const SeedResult r = run_algo(g, spec, so.k, co.workers, so.dd_p, degree);

  Output sink(co.out_path, out);
  if (co.format == "csv") {
    *sink << "rank,node,marginal_gain\n" << std::setprecision(12);
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
      *sink << i + 1 << ',' << g.original_id(r.seeds[i]) << ',';
      if (i < r.marginal_gains.size()) *sink << r.marginal_gains[i];
      *sink << '\n';
    }
    return kExitOk;
  }
  json doc;
  doc["command"] = "select";
  doc["algorithm"] = r.algorithm;
  doc["seeds"] = ids_json(g, r.seeds);
  doc["marginal_gains"] = r.marginal_gains;
  double total = 0.0;
  for (double x : r.marginal_gains) total += x;
  if (spec.kind == AlgoSpec::hop) doc["hop_spread"] = total;
  doc["elapsed_seconds"] = r.elapsed_seconds;
  doc["evaluations"] = r.evaluations;
  doc["rng_seed"] = seed;
  doc["config"] = {{"graph", go.path},
                   {"model", go.model},
                   {"scale", go.scale},
                   {"k", so.k},
                   {"hops", spec.kind == AlgoSpec::hop ? json(spec.hop_cfg.hops) : json(nullptr)},
                   {"diffusion", co.diffusion},
                   {"workers", co.workers},
                   {"nodes", g.node_count()},
                   {"edges", g.edge_count()}};
  *sink << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_evaluate(const GraphOptions& go, const CommonOptions& co, const EvaluateOptions& eo, std::ostream& out) {
  check_format(co.format);
  const Diffusion diffusion = parse_diffusion(co.diffusion);
  const int hop_limit = parse_hop_limit(eo.hop_limit);
  if (eo.sims == 0) throw ConfigError("--sims must be at least 1");
  if (eo.seeds_path.empty()) throw ConfigError("--seeds is required");
  const std::uint64_t seed = resolve_seed(co);
  const Graph g = load_graph(go, go.scale, seed);
  if (diffusion == Diffusion::lt && !validate_lt(g).empty()) {
    throw DataError("graph violates the LT weight constraint");
  }
  const auto seeds = read_seeds(eo.seeds_path, g);
  const SpreadEstimate est = estimate_spread(g, seeds, diffusion, hop_limit, eo.sims, seed, co.workers);

  Output sink(co.out_path, out);
  if (co.format == "csv") {
    *sink << "mean,std_error,simulations,hop_limit\n" << std::setprecision(12) << est.mean << ','
          << est.std_error << ',' << est.simulations << ','
          << (hop_limit == kUnlimitedHops ? std::string("inf") : std::to_string(hop_limit)) << '\n';
    return kExitOk;
  }
  json doc;
  doc["command"] = "evaluate";
  doc["mean"] = est.mean;
  doc["std_error"] = est.std_error;
  doc["simulations"] = est.simulations;
  doc["hop_limit"] = hop_limit_json(hop_limit);
  doc["diffusion"] = co.diffusion;
  doc["seeds"] = ids_json(g, seeds);
  doc["rng_seed"] = seed;
  doc["rng"] = std::string(rng::kGeneratorName) + "/v" + std::to_string(rng::kGeneratorVersion);
  *sink << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_bounds(const GraphOptions& go, const CommonOptions& co, int hops, std::ostream& out) {
  check_format(co.format);
  if (hops < 1) throw ConfigError("--hops must be at least 1");
  const std::uint64_t seed = resolve_seed(co);
  const Graph g = load_graph(go, go.scale, seed);
  const UpperBounds b = upper_bounds(g, hops, co.workers);
  Output sink(co.out_path, out);
  if (co.format == "csv") {
    *sink << "node,bound\n" << std::setprecision(12);
    for (NodeId v = 0; v < g.node_count(); ++v) *sink << g.original_id(v) << ',' << b.values[v] << '\n';
    return kExitOk;
  }
  json doc;
  doc["command"] = "bounds";
  doc["hops"] = hops;
  json arr = json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) arr.push_back({{"node", g.original_id(v)}, {"bound", b.values[v]}});
  doc["bounds"] = std::move(arr);
  *sink << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_alpha_surface(const analysis::SurfaceGrid& grid, const CommonOptions& co, std::ostream& out) {
  const auto points = analysis::alpha_surface(grid, co.workers);
  Output sink(co.out_path, out);
  analysis::write_surface_csv(*sink, points);
  return kExitOk;
}

int cmd_bench(const GraphOptions& go, const CommonOptions& co, const BenchOptions& bo, std::ostream& out) {
  if (bo.algos.empty() || bo.ks.empty() || bo.scales.empty()) {
    throw ConfigError("bench needs non-empty --algos, --k and --scales lists");
  }
  if (bo.sims == 0) throw ConfigError("--sims must be at least 1");
  const Diffusion diffusion = parse_diffusion(co.diffusion);
  std::vector<AlgoSpec> specs;
  for (const auto& a : bo.algos) specs.push_back(parse_algo(a, 0, diffusion));
  for (auto k : bo.ks) {
    if (k == 0) throw ConfigError("--k values must be at least 1");
  }
  const std::uint64_t seed = resolve_seed(co);

  Output sink(co.out_path, out);
  *sink << "algorithm,k,scale_factor,seconds,evaluations,spread_estimate\n" << std::setprecision(10);
  for (double scale : bo.scales) {
    const Graph g = load_graph(go, scale, seed);
    for (std::size_t a = 0; a < specs.size(); ++a) {
      for (auto k : bo.ks) {
        const SeedResult r = run_algo(g, specs[a], k, co.workers, 0.01, DegreeKind::out);
        const SpreadEstimate est = estimate_spread(g, r.seeds, diffusion, kUnlimitedHops, bo.sims, seed, co.workers);
        *sink << bo.algos[a] << ',' << k << ',' << scale << ',' << r.elapsed_seconds << ',' << r.evaluations
              << ',' << est.mean << '\n';
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hop-based influence maximization"};
  app.require_subcommand(1);

  GraphOptions go;
  CommonOptions co;
  SelectOptions so;
  EvaluateOptions eo;
  BenchOptions bo;
  int bound_hops = 2;
  analysis::SurfaceGrid grid;

  auto* select = app.add_subcommand("select", "Choose k seeds");
  add_graph_options(select, go, false);
  add_common_options(select, co, true);
  select->add_option("--algo", so.algo, "onehop | twohop | twohop-o | highdegree | degreediscount");
  select->add_option("--k", so.k, "Number of seeds")->required();
  select->add_option("--hops", so.hops, "Hop limit of the estimator (implied by --algo)");
  select->add_option("--dd-p", so.dd_p, "Propagation probability assumed by degreediscount");
  select->add_option("--degree", so.degree, "Degree used by highdegree: out | in | total");

  auto* evaluate = app.add_subcommand("evaluate", "Monte-Carlo spread of a seed set");
  add_graph_options(evaluate, go, false);
  add_common_options(evaluate, co, true);
  evaluate->add_option("--seeds", eo.seeds_path, "JSON list / select output / one id per line")->required();
  evaluate->add_option("--sims", eo.sims, "Number of simulations");
  evaluate->add_option("--hop-limit", eo.hop_limit, "Propagation levels (integer or inf)");

  auto* bounds = app.add_subcommand("bounds", "Single-seed spread upper bounds");
  add_graph_options(bounds, go, false);
  add_common_options(bounds, co, true);
  bounds->add_option("--hops", bound_hops, "Recursion depth");

  auto* surface = app.add_subcommand("alpha-surface", "CSV grid of the scale-free alpha lower bound");
  surface->add_option("--gamma", grid.gamma, "Power-law exponent");
  surface->add_option("--p-max", grid.p_max, "Largest propagation probability");
  surface->add_option("--p-steps", grid.p_steps, "Grid points along p");
  surface->add_option("--ratio-max", grid.ratio_max, "Largest seed ratio k/|V|");
  surface->add_option("--ratio-steps", grid.ratio_steps, "Grid points along the seed ratio");
  surface->add_option("--truncation", grid.truncation, "Degree at which infinite sums are cut");
  surface->add_option("--workers", co.workers, "OpenMP worker threads (0 = all)");
  surface->add_option("--out", co.out_path, "Write output to this file instead of stdout");

  auto* bench = app.add_subcommand("bench", "Timing table over algorithms, k and scale factors");
  add_graph_options(bench, go, true);
  add_common_options(bench, co, false);
  bench->add_option("--algos", bo.algos, "Algorithms to time")->delimiter(',');
  bench->add_option("--k", bo.ks, "Seed-set sizes")->delimiter(',');
  bench->add_option("--scales", bo.scales, "Probability scale factors")->delimiter(',');
  bench->add_option("--sims", bo.sims, "Simulations per spread estimate");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*select) return cmd_select(go, co, so, out);
    if (*evaluate) return cmd_evaluate(go, co, eo, out);
    if (*bounds) return cmd_bounds(go, co, bound_hops, out);
    if (*surface) return cmd_alpha_surface(grid, co, out);
    if (*bench) return cmd_bench(go, co, bo, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace hopim::cli
