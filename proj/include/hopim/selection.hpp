#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hopim/graph.hpp"
#include "hopim/hop_estimator.hpp"

namespace hopim {

/// How CELF's priority queue is filled before the first selection.
enum class Bootstrap {
  none,          // exact gain of every node (cli: twohop-o)
  upper_bounds,  // single-seed upper bounds, evaluated lazily (cli: twohop)
};

struct SeedResult {
  std::vector<NodeId> seeds;
  std::vector<double> marginal_gains;  // empty for the degree heuristics
  std::string algorithm;
  double elapsed_seconds = 0.0;
  std::uint64_t evaluations = 0;
};

/// Gains closer than this are treated as equal and broken by smaller id.
inline constexpr double kGainTieTolerance = 1e-12;

/// True when (gain_a, a) should be selected before (gain_b, b).
inline bool ranks_before(double gain_a, NodeId a, double gain_b, NodeId b) {
  if (gain_a > gain_b + kGainTieTolerance) return true;
  if (gain_b > gain_a + kGainTieTolerance) return false;
  return a < b;
}

/// Lazy greedy (CELF) over the exact hop-limited estimator. The first-round
/// batch under Bootstrap::none runs on `workers` OpenMP threads.
SeedResult greedy_celf(const Graph& g, const HopConfig& estimator, std::size_t k,
                       Bootstrap bootstrap, int workers = 0);

/// Plain greedy re-evaluating every non-seed in every round. Reference for CELF.
SeedResult greedy_naive(const Graph& g, const HopConfig& estimator, std::size_t k);

/// Exact gains of every node against an empty-seed state, in node order.
std::vector<double> first_round_gains(const HopState& state, int workers = 0);
namespace serial {
std::vector<double> first_round_gains(const HopState& state);
}

enum class DegreeKind { out, in, total };

SeedResult high_degree(const Graph& g, std::size_t k, DegreeKind kind = DegreeKind::out);

/// Degree discount: dd_v = d_v - 2 t_v - (d_v - t_v) t_v p, with d the
/// out-degree and t_v the number of already selected in-neighbours of v.
SeedResult degree_discount(const Graph& g, std::size_t k, double p = 0.01);

}  // namespace hopim
