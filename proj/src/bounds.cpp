#include "hopim/bounds.hpp"

#include <string>

#include "hopim/error.hpp"
#include "hopim/parallel.hpp"

namespace hopim {

namespace {

void check_hops(int hops) {
  if (hops < 0) throw ConfigError("hop count must be non-negative, got " + std::to_string(hops));
}

double level_value(const Graph& g, const std::vector<double>& prev, NodeId v) {
  auto nbrs = g.out_neighbors(v);
  auto probs = g.out_probs(v);
  double acc = 1.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) acc += probs[i] * prev[nbrs[i]];
  return acc;
}

}  // namespace

UpperBounds upper_bounds(const Graph& g, int hops, int workers) {
  check_hops(hops);
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::vector<double> prev(g.node_count(), 1.0);
  std::vector<double> next(g.node_count(), 1.0);
  const int threads = resolve_workers(workers);
  for (int level = 1; level <= hops; ++level) {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1024)
    for (std::int64_t v = 0; v < n; ++v) next[v] = level_value(g, prev, static_cast<NodeId>(v));
    prev.swap(next);
  }
  return {hops, std::move(prev)};
}

namespace serial {

UpperBounds upper_bounds(const Graph& g, int hops) {
  check_hops(hops);
  std::vector<double> prev(g.node_count(), 1.0);
  std::vector<double> next(g.node_count(), 1.0);
  for (int level = 1; level <= hops; ++level) {
    for (NodeId v = 0; v < g.node_count(); ++v) next[v] = level_value(g, prev, v);
    prev.swap(next);
  }
  return {hops, std::move(prev)};
}

}  // namespace serial

}  // namespace hopim
