#pragma once

#include <vector>

#include "hopim/graph.hpp"

namespace hopim {

/// Single-seed spread upper bounds
///   bound_0(v) = 1,  bound_h(v) = 1 + sum_{w in N_v} p_vw * bound_{h-1}(w).
/// bound_1 is exact; bound_h dominates the h-hop spread of {v} under IC.
struct UpperBounds {
  int hops = 0;
  std::vector<double> values;
};

/// One O(|V|+|E|) pass per level, parallel over nodes.
UpperBounds upper_bounds(const Graph& g, int hops, int workers = 0);

namespace serial {
UpperBounds upper_bounds(const Graph& g, int hops);
}

}  // namespace hopim
