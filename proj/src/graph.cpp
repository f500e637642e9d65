#include "hopim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "hopim/error.hpp"
#include "hopim/rng.hpp"

namespace hopim {

namespace {

constexpr double kLtTolerance = 1e-9;

bool edge_less(const Edge& a, const Edge& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

std::string describe(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.src << "," << e.dst << ")";
  return os.str();
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                        std::vector<std::uint64_t> original_ids) {
  if (!original_ids.empty() && original_ids.size() != node_count) {
    throw DataError("original id table size does not match node count");
  }
  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw DataError("edge " + describe(e) + " references a node outside [0, " +
                      std::to_string(node_count) + ")");
    }
    if (e.src == e.dst) throw DataError("self-loop at node " + std::to_string(e.src));
    if (!(e.p >= 0.0 && e.p <= 1.0)) {
      throw DataError("probability of edge " + describe(e) + " outside [0,1]");
    }
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  auto dup = std::adjacent_find(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src == b.src && a.dst == b.dst;
  });
  if (dup != edges.end()) throw DataError("duplicate edge " + describe(*dup));

  Graph g;
  const std::size_t m = edges.size();
  g.out_offsets_.assign(node_count + 1, 0);
  g.in_offsets_.assign(node_count + 1, 0);
  for (const Edge& e : edges) {
    ++g.out_offsets_[e.src + 1];
    ++g.in_offsets_[e.dst + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

  g.out_targets_.resize(m);
  g.out_probs_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    g.out_targets_[i] = edges[i].dst;
    g.out_probs_[i] = edges[i].p;
  }

  // Edges are sorted by source, so filling the in-view in that order leaves
  // every in-list sorted by source as well.
  g.in_sources_.resize(m);
  g.in_probs_.resize(m);
  g.in_to_out_.resize(m);
  std::vector<EdgeIndex> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeIndex slot = cursor[edges[i].dst]++;
    g.in_sources_[slot] = edges[i].src;
    g.in_probs_[slot] = edges[i].p;
    g.in_to_out_[slot] = i;
  }
  g.original_ids_ = std::move(original_ids);
  return g;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    auto nbrs = out_neighbors(u);
    auto probs = out_probs(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) out.push_back({u, nbrs[i], probs[i]});
  }
  return out;
}

std::vector<Edge> Graph::edges_from_in_view() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    auto srcs = in_neighbors(v);
    auto probs = in_probs(v);
    for (std::size_t i = 0; i < srcs.size(); ++i) out.push_back({srcs[i], v, probs[i]});
  }
  std::sort(out.begin(), out.end(), edge_less);
  return out;
}

Graph Graph::with_probabilities(std::span<const double> probs) const {
  if (probs.size() != edge_count()) throw DataError("probability vector size mismatch");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("probability outside [0,1]");
  }
  Graph g = *this;
  std::copy(probs.begin(), probs.end(), g.out_probs_.begin());
  for (std::size_t slot = 0; slot < g.in_probs_.size(); ++slot) {
    g.in_probs_[slot] = probs[g.in_to_out_[slot]];
  }
  return g;
}

NodeId Graph::internal_id(std::uint64_t original) const {
  if (original_ids_.empty()) {
    if (original >= node_count()) throw DataError("unknown node id " + std::to_string(original));
    return static_cast<NodeId>(original);
  }
  auto it = std::find(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end()) throw DataError("unknown node id " + std::to_string(original));
  return static_cast<NodeId>(it - original_ids_.begin());
}

Graph load_edge_list(std::istream& in, const LoadOptions& opts) {
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::vector<std::uint64_t> original_ids;
  std::unordered_map<std::uint64_t, NodeId> remap;
  std::uint64_t max_id = 0;
  bool any = false;

  auto intern = [&](std::uint64_t raw) -> NodeId {
    if (!opts.compact_ids) {
      if (raw >= std::numeric_limits<NodeId>::max()) throw DataError("node id too large");
      return static_cast<NodeId>(raw);
    }
    auto [it, inserted] = remap.try_emplace(raw, static_cast<NodeId>(original_ids.size()));
    if (inserted) original_ids.push_back(raw);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string tok[4];
    int n = 0;
    while (n < 4 && fields >> tok[n]) ++n;
    const std::string where = " at line " + std::to_string(lineno);
    if (n < 2 || n > 3) throw DataError("malformed edge line" + where);

    std::uint64_t ids[2];
    for (int i = 0; i < 2; ++i) {
      const std::string& t = tok[i];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), ids[i]);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw DataError("malformed node id '" + t + "'" + where);
      }
    }
    double p = 0.0;
    if (n == 3) {
      try {
        std::size_t used = 0;
        p = std::stod(tok[2], &used);
        if (used != tok[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError("malformed probability '" + tok[2] + "'" + where);
      }
      if (!(p >= 0.0 && p <= 1.0)) throw DataError("probability outside [0,1]" + where);
    }
    if (ids[0] == ids[1]) throw DataError("self-loop" + where);
    const NodeId u = intern(ids[0]);
    const NodeId v = intern(ids[1]);
    max_id = std::max<std::uint64_t>(max_id, std::max(u, v));
    any = true;
    edges.push_back({u, v, p});
    edge_lines.push_back(lineno);
  }

  std::size_t n = any ? static_cast<std::size_t>(max_id) + 1 : 0;
  if (opts.compact_ids) {
    n = original_ids.size();
    // Extra isolated nodes get fresh ids above the largest seen one.
    std::uint64_t next = original_ids.empty() ? 0 : *std::max_element(original_ids.begin(), original_ids.end()) + 1;
    while (original_ids.size() < opts.num_nodes) original_ids.push_back(next++);
    n = original_ids.size();
  } else {
    n = std::max(n, opts.num_nodes);
  }

  // Report duplicates with their line context before from_edges sorts them away.
  {
    std::vector<std::pair<std::uint64_t, std::size_t>> keys(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      keys[i] = {(static_cast<std::uint64_t>(edges[i].src) << 32) | edges[i].dst, i};
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i) {
      if (keys[i].first == keys[i - 1].first) {
        const std::size_t at = std::max(keys[i].second, keys[i - 1].second);
        throw DataError("duplicate edge " + describe(edges[at]) + " at line " +
                        std::to_string(edge_lines[at]));
      }
    }
  }
  return Graph::from_edges(n, std::move(edges), std::move(original_ids));
}

Graph load_edge_list_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file " + path);
  return load_edge_list(in, opts);
}

WeightModel WeightModel::parse(const std::string& spec, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale factor must be positive");
  auto value_after = [&](std::size_t colon) {
    if (colon == std::string::npos || colon + 1 >= spec.size()) {
      throw ConfigError("weight model '" + spec + "' needs a value after ':'");
    }
    return spec.substr(colon + 1);
  };
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  try {
    if (head == "wc" && colon == std::string::npos) return weighted_cascade(scale);
    if (head == "file" && colon == std::string::npos) return from_file(scale);
    std::size_t used = 0;
    if (head == "tri") {
      const std::string value = value_after(colon);
      const auto seed = std::stoull(value, &used);
      if (used != value.size() || value[0] == '-') throw std::invalid_argument("trailing");
      return trivalency(seed, scale);
    }
    if (head == "uniform") {
      const std::string value = value_after(colon);
      const double p = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("uniform probability outside [0,1]");
      return uniform(p, scale);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("cannot parse weight model '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("cannot parse weight model '" + spec + "'");
  }
  throw ConfigError("unknown weight model '" + spec + "' (expected wc|tri:<seed>|uniform:<p>|file)");
}

Graph apply_weight_model(const Graph& g, const WeightModel& m) {
  if (!(m.scale_factor > 0.0)) throw ConfigError("scale factor must be positive");
  std::vector<double> probs(g.edge_count());
  EdgeIndex i = 0;
  switch (m.kind) {
    case WeightKind::wc:
      for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.out_neighbors(u)) probs[i++] = 1.0 / static_cast<double>(g.in_degree(v));
      }
      break;
    case WeightKind::trivalency: {
      static constexpr double kLevels[3] = {0.1, 0.01, 0.001};
      rng::Engine eng(m.rng_seed);
      std::uniform_int_distribution<int> pick(0, 2);
      for (auto& p : probs) p = kLevels[pick(eng)];
      break;
    }
    case WeightKind::uniform:
      if (!(m.uniform_p >= 0.0 && m.uniform_p <= 1.0)) {
        throw ConfigError("uniform probability outside [0,1]");
      }
      std::fill(probs.begin(), probs.end(), m.uniform_p);
      break;
    case WeightKind::from_file:
      for (NodeId u = 0; u < g.node_count(); ++u) {
        for (double p : g.out_probs(u)) probs[i++] = p;
      }
      break;
  }
  if (m.scale_factor != 1.0) {
    for (auto& p : probs) p = std::clamp(p * m.scale_factor, 0.0, 1.0);
  }
  return g.with_probabilities(probs);
}

std::vector<NodeId> validate_lt(const Graph& g) {
  std::vector<NodeId> bad;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double sum = 0.0;
    for (double b : g.in_probs(v)) sum += b;
    if (sum > 1.0 + kLtTolerance) bad.push_back(v);
  }
  return bad;
}

Graph generate_power_law(const PowerLawOptions& opts) {
  if (opts.nodes < 2) throw ConfigError("power-law graph needs at least 2 nodes");
  if (!(opts.gamma > 1.0)) throw ConfigError("power-law exponent must exceed 1");
  const std::size_t n = opts.nodes;

  // Node weights w_i ~ (i+1)^(-1/(gamma-1)); degree of node i is then
  // power-law distributed with exponent gamma.
  std::vector<double> weight(n);
  const double expo = -1.0 / (opts.gamma - 1.0);
  for (std::size_t i = 0; i < n; ++i) weight[i] = std::pow(static_cast<double>(i + 1), expo);

  // Shuffle ids so degree is not correlated with node id.
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), 0);
  rng::Engine eng(opts.seed);
  std::shuffle(label.begin(), label.end(), eng);

  std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
  std::vector<std::uint64_t> keys;
  keys.reserve(opts.symmetric ? 2 * opts.edges : opts.edges);
  for (std::size_t e = 0; e < opts.edges; ++e) {
    const NodeId a = label[pick(eng)];
    const NodeId b = label[pick(eng)];
    if (a == b) continue;
    keys.push_back((static_cast<std::uint64_t>(a) << 32) | b);
    if (opts.symmetric) keys.push_back((static_cast<std::uint64_t>(b) << 32) | a);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<Edge> edges(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    edges[i] = {static_cast<NodeId>(keys[i] >> 32), static_cast<NodeId>(keys[i] & 0xffffffffULL), 0.0};
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace hopim
