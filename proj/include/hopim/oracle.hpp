#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hopim/graph.hpp"
#include "hopim/hop_estimator.hpp"
#include "hopim/rng.hpp"

namespace hopim {

inline constexpr int kUnlimitedHops = std::numeric_limits<int>::max();

struct SpreadEstimate {
  double mean = 0.0;
  std::size_t simulations = 0;
  double std_error = 0.0;
  int hop_limit = kUnlimitedHops;
};

/// Reusable per-thread buffers for simulate_once. Visited marks are
/// epoch-stamped so a simulation costs O(activated region), not O(|V|).
class SimScratch {
 public:
  SimScratch() = default;
  explicit SimScratch(std::size_t nodes) { resize(nodes); }
  void resize(std::size_t nodes);

 private:
  friend std::size_t simulate_once(const Graph&, std::span<const NodeId>, Diffusion, int,
                                   rng::Engine&, SimScratch&);
  std::uint32_t next_epoch();

  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> active_;   // == epoch_ when active
  std::vector<std::uint32_t> touched_;  // == epoch_ when threshold drawn (LT)
  std::vector<double> threshold_;
  std::vector<double> weight_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

/// One cascade from `seeds`, propagating at most `hop_limit` levels.
/// IC samples each edge lazily, at most once. LT draws node thresholds
/// uniformly in [0,1] on first contact and activates when the incoming
/// active weight reaches the threshold. Returns the number of active nodes.
std::size_t simulate_once(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                          int hop_limit, rng::Engine& eng, SimScratch& scratch);

/// Mean and standard error over `n_sims` runs; run i uses sub-stream i of
/// `rng_seed`, and counts are summed as integers, so the result does not
/// depend on the worker count.
SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                               int hop_limit, std::size_t n_sims, std::uint64_t rng_seed,
                               int workers = 0);
namespace serial {
SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                               int hop_limit, std::size_t n_sims, std::uint64_t rng_seed);
}

/// Enumeration limits for the exact oracles.
inline constexpr std::size_t kMaxEnumeratedEdges = 22;
inline constexpr std::uint64_t kMaxLtOutcomes = std::uint64_t{1} << 22;

/// Exact expected number of nodes within `hop_limit` hops of the seeds,
/// summed over all live-edge outcomes. IC flips every edge; LT lets every
/// node keep at most one in-edge (edge (u,v) with probability b_uv).
double exact_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model, int hop_limit);

struct OptimalSeedSet {
  std::vector<NodeId> seeds;
  double spread = 0.0;
};

/// Maximises exact_spread over every size-k subset; ties go to the
/// lexicographically smallest set.
OptimalSeedSet brute_force_optimal(const Graph& g, std::size_t k, Diffusion model, int hop_limit);

}  // namespace hopim
