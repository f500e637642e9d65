#pragma once

// Independent test oracles. These work directly with activation
// probabilities (not survival complements) and recompute everything from
// scratch, so they share no code paths with the incremental estimator.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "hopim/graph.hpp"
#include "hopim/hop_estimator.hpp"

namespace hopim::fixtures {

struct RandomGraphOptions {
  std::size_t max_nodes = 10;
  std::size_t max_edges = 12;
  std::size_t min_nodes = 2;
  double p_one_share = 0.0;     // fraction of edges forced to p = 1
  double two_cycle_share = 0.0; // chance that an added edge also gets its reverse
  bool lt_weights = false;      // rescale so every in-weight sum is <= 1
};

inline Graph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  std::uniform_int_distribution<std::size_t> nd(o.min_nodes, o.max_nodes);
  const std::size_t n = nd(rng);
  std::uniform_int_distribution<std::size_t> md(0, std::min(o.max_edges, n * (n - 1)));
  const std::size_t m = md(rng);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::uniform_real_distribution<double> prob(0.0, 1.0);

  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  auto add = [&](NodeId a, NodeId b) {
    if (a == b || edges.size() >= m || !seen.insert({a, b}).second) return;
    edges.push_back({a, b, prob(rng) < o.p_one_share ? 1.0 : prob(rng)});
  };
  for (std::size_t attempts = 0; edges.size() < m && attempts < 20 * m + 20; ++attempts) {
    const NodeId a = node(rng), b = node(rng);
    add(a, b);
    if (prob(rng) < o.two_cycle_share) add(b, a);
  }
  if (o.lt_weights) {
    std::vector<double> in_sum(n, 0.0);
    for (const auto& e : edges) in_sum[e.dst] += e.p;
    // Scale each node's in-weights to a random total in [0,1].
    std::vector<double> target(n);
    for (auto& t : target) t = prob(rng);
    for (auto& e : edges) {
      if (in_sum[e.dst] > 0.0) e.p = e.p / in_sum[e.dst] * target[e.dst];
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

inline std::vector<NodeId> random_subset(std::mt19937_64& rng, std::size_t n, std::size_t size) {
  std::vector<NodeId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, n));
  return all;
}

struct ReferencePi {
  std::vector<double> pi1;
  std::vector<double> pi2;
};

/// One- and two-hop activation probabilities straight from their product
/// (IC) or sum (LT) definitions.
inline ReferencePi reference_pi(const Graph& g, const std::vector<NodeId>& seeds, Diffusion model) {
  const std::size_t n = g.node_count();
  std::vector<bool> in_s(n, false);
  for (NodeId s : seeds) in_s[s] = true;
  ReferencePi r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const auto edges = g.edges();

  if (model == Diffusion::ic) {
    std::vector<double> fail1(n, 1.0);
    for (const auto& e : edges) {
      if (in_s[e.src]) fail1[e.dst] *= 1.0 - e.p;
    }
    for (std::size_t v = 0; v < n; ++v) r.pi1[v] = in_s[v] ? 1.0 : 1.0 - fail1[v];
    std::vector<double> fail2(n, 1.0);
    for (const auto& e : edges) fail2[e.dst] *= 1.0 - e.p * r.pi1[e.src];
    for (std::size_t v = 0; v < n; ++v) r.pi2[v] = in_s[v] ? 1.0 : 1.0 - fail2[v];
  } else {
    for (const auto& e : edges) {
      if (in_s[e.src] && !in_s[e.dst]) r.pi1[e.dst] += e.p;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (in_s[v]) r.pi1[v] = 1.0;
    }
    for (const auto& e : edges) {
      if (!in_s[e.dst]) r.pi2[e.dst] += e.p * r.pi1[e.src];
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (in_s[v]) r.pi2[v] = 1.0;
    }
  }
  return r;
}

inline double reference_spread(const Graph& g, const std::vector<NodeId>& seeds, Diffusion model, int hops) {
  const auto r = reference_pi(g, seeds, model);
  const auto& pi = hops == 1 ? r.pi1 : r.pi2;
  double total = 0.0;
  for (double x : pi) total += x;
  return total;
}

/// Plain greedy over reference_spread, ties to the smaller id within 1e-12.
inline std::vector<NodeId> reference_greedy(const Graph& g, Diffusion model, int hops, std::size_t k) {
  std::vector<NodeId> seeds;
  std::vector<bool> taken(g.node_count(), false);
  double base = 0.0;
  for (std::size_t round = 0; round < k; ++round) {
    double best_gain = -1.0;
    NodeId best = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (taken[u]) continue;
      auto trial = seeds;
      trial.push_back(u);
      const double gain = reference_spread(g, trial, model, hops) - base;
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best = u;
      }
    }
    seeds.push_back(best);
    taken[best] = true;
    base += best_gain;
  }
  return seeds;
}

/// 0 -> 1 -> 2, both edges with probability 0.5.
inline Graph half_chain() { return Graph::from_edges(3, {{0, 1, 0.5}, {1, 2, 0.5}}); }

}  // namespace hopim::fixtures
