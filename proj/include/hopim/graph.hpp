#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace hopim {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint64_t;

struct Edge {
  NodeId src;
  NodeId dst;
  double p;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable directed graph stored twice in compressed-row form: once by
/// source (out-neighbours) and once by destination (in-neighbours). Both views
/// carry the same per-edge probability.
///
/// Invariants enforced at construction: ids < node_count, no self-loops, no
/// duplicate (u,v) pairs, every probability in [0,1].
class Graph {
 public:
  Graph() = default;

  /// Validates and builds both adjacency views. `original_ids`, when
  /// non-empty, maps internal id -> id used in the input file.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges,
                          std::vector<std::uint64_t> original_ids = {});

  std::size_t node_count() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t edge_count() const { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const double> out_probs(NodeId u) const {
    return {out_probs_.data() + out_offsets_[u], out_probs_.data() + out_offsets_[u + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::span<const double> in_probs(NodeId v) const {
    return {in_probs_.data() + in_offsets_[v], in_probs_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  /// Edges in out-view order (grouped by source, targets ascending).
  std::vector<Edge> edges() const;
  /// Edges reconstructed from the in-view, sorted the same way as edges().
  std::vector<Edge> edges_from_in_view() const;

  /// Copy with new probabilities, indexed like edges().
  Graph with_probabilities(std::span<const double> probs) const;

  std::uint64_t original_id(NodeId u) const {
    return original_ids_.empty() ? u : original_ids_[u];
  }
  /// Internal id for an id as it appeared in the input; throws DataError when unknown.
  NodeId internal_id(std::uint64_t original) const;
  bool has_remap() const { return !original_ids_.empty(); }

 private:
  std::vector<EdgeIndex> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<double> out_probs_;
  std::vector<EdgeIndex> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<double> in_probs_;
  // in-view slot -> out-view slot, so probability rewrites stay consistent.
  std::vector<EdgeIndex> in_to_out_;
  std::vector<std::uint64_t> original_ids_;
};

struct LoadOptions {
  /// Force |V| to at least this many nodes (isolated trailing vertices).
  std::size_t num_nodes = 0;
  /// Densify sparse ids in order of first appearance instead of using them directly.
  bool compact_ids = false;
};

/// Parses "u v" or "u v p" lines; '#' lines and blank lines are skipped.
/// Edges without p get 0 as a placeholder for a later weight model.
Graph load_edge_list(std::istream& in, const LoadOptions& opts = {});
Graph load_edge_list_file(const std::string& path, const LoadOptions& opts = {});

enum class WeightKind { wc, trivalency, uniform, from_file };

struct WeightModel {
  WeightKind kind = WeightKind::wc;
  std::uint64_t rng_seed = 0;  // trivalency
  double uniform_p = 0.0;      // uniform
  double scale_factor = 1.0;

  static WeightModel weighted_cascade(double scale = 1.0) { return {WeightKind::wc, 0, 0.0, scale}; }
  static WeightModel trivalency(std::uint64_t seed, double scale = 1.0) {
    return {WeightKind::trivalency, seed, 0.0, scale};
  }
  static WeightModel uniform(double p, double scale = 1.0) { return {WeightKind::uniform, 0, p, scale}; }
  static WeightModel from_file(double scale = 1.0) { return {WeightKind::from_file, 0, 0.0, scale}; }

  /// Parses "wc", "tri:<seed>", "uniform:<p>" or "file".
  static WeightModel parse(const std::string& spec, double scale = 1.0);
};

Graph apply_weight_model(const Graph& g, const WeightModel& m);

/// Nodes whose incoming weight sum exceeds 1 + 1e-9; empty means LT-admissible.
std::vector<NodeId> validate_lt(const Graph& g);

struct PowerLawOptions {
  std::size_t nodes = 0;
  std::size_t edges = 0;  // target before self-loop/duplicate removal
  double gamma = 2.5;
  std::uint64_t seed = 1;
  bool symmetric = false;  // add both directions of every sampled pair
};

/// Chung-Lu style directed power-law graph with expected degree of node i
/// proportional to (i+1)^(-1/(gamma-1)). Probabilities are left at 0.
Graph generate_power_law(const PowerLawOptions& opts);

}  // namespace hopim
