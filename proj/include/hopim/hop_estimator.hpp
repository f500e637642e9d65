#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hopim/graph.hpp"

namespace hopim {

enum class Diffusion { ic, lt };

const char* to_string(Diffusion d);

struct HopConfig {
  Diffusion model = Diffusion::ic;
  int hops = 2;  // 1 or 2
  /// Full from-scratch recomputation of the probability arrays every this
  /// many commits (0 disables).
  std::size_t refresh_interval = 1024;
};

/// New survival complements for one node, as they would be after a commit.
struct TouchedNode {
  NodeId node;
  double q1;
  double q2;
};

/// Result of probing a candidate seed against a fixed HopState.
struct GainReport {
  NodeId candidate = 0;
  double gain = 0.0;
  std::vector<TouchedNode> touched;
  std::uint64_t state_version = 0;
};

/// Per-thread scratch for eval_gain. Sized to the graph on first use and
/// left clean after every call.
class EvalScratch {
 public:
  EvalScratch() = default;

 private:
  friend class HopState;
  std::vector<std::int32_t> slot_;
  std::vector<std::uint8_t> recompute_;
  std::vector<TouchedNode> touched_;
};

/// Exact 1-hop / 2-hop activation probabilities of every node for the
/// current seed set, maintained incrementally as seeds are committed.
///
/// Probabilities are stored as survival complements q = 1 - pi. Under IC:
///   q1[v] = prod_{w in I_v cap S} (1 - p_wv)
///   q2[v] = prod_{w in I_v} ((1 - p_wv) + p_wv * q1[w])
/// and under LT:
///   pi1[v] = sum_{w in I_v cap S} b_wv,  pi2[v] = sum_{w in I_v} b_wv * pi1[w]
/// with q = 0 for seeds in both models.
///
/// The referenced graph must outlive the state. eval_gain is const and safe
/// to call concurrently with distinct scratch objects; commit needs
/// exclusive access and invalidates outstanding reports.
class HopState {
 public:
  HopState(const Graph& g, const HopConfig& cfg);

  const Graph& graph() const { return *g_; }
  Diffusion model() const { return cfg_.model; }
  int hops() const { return cfg_.hops; }
  const HopConfig& config() const { return cfg_; }

  /// Exact hop-limited marginal gain of adding `u`. Throws DataError if `u`
  /// is already a seed or out of range.
  GainReport eval_gain(NodeId u, EvalScratch& scratch) const;
  GainReport eval_gain(NodeId u) const;

  /// Applies a report produced against this exact state version.
  void commit(const GainReport& report);

  /// eval_gain followed by commit.
  double add_seed(NodeId u);

  /// Running hop-limited spread sigma_h(S).
  double spread() const { return sigma_; }
  /// Sum of pi_h over all nodes recomputed from the stored arrays.
  double spread_from_arrays() const;

  /// pi_hop^S(v) for hop in {1, hops()}.
  double activation(NodeId v, int hop) const;
  bool is_seed(NodeId v) const { return seed_[v] != 0; }
  std::span<const NodeId> seeds() const { return seeds_; }
  std::uint64_t version() const { return version_; }

  /// Recompute q1, q2 and the spread from the closed forms over the current seed set.
  void refresh();

 private:
  void eval_ic1(NodeId u, EvalScratch& s) const;
  void eval_ic2(NodeId u, EvalScratch& s) const;
  void eval_lt(NodeId u, EvalScratch& s) const;
  TouchedNode& touch(NodeId v, EvalScratch& s) const;
  double fresh_q2_ic(NodeId v, NodeId u, const EvalScratch& s) const;

  const Graph* g_;
  HopConfig cfg_;
  std::vector<std::uint8_t> seed_;
  std::vector<NodeId> seeds_;
  std::vector<double> q1_;
  std::vector<double> q2_;
  double sigma_ = 0.0;
  std::uint64_t version_ = 0;
  std::size_t commits_since_refresh_ = 0;
};

/// Closed-form activation probabilities for an arbitrary seed set, computed
/// from scratch. Returned as pi values (not complements).
struct HopProbabilities {
  std::vector<double> pi1;
  std::vector<double> pi2;
};
HopProbabilities closed_form_probabilities(const Graph& g, std::span<const NodeId> seeds,
                                           Diffusion model);

}  // namespace hopim
