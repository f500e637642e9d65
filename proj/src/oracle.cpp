#include "hopim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hopim/error.hpp"
#include "hopim/parallel.hpp"

namespace hopim {

namespace {

void check_seeds(const Graph& g, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw DataError("seed id " + std::to_string(s) + " out of range");
  }
}

void check_hop_limit(int hop_limit) {
  if (hop_limit < 0) throw ConfigError("hop limit must be non-negative");
}

SpreadEstimate summarize(const std::vector<std::uint32_t>& counts, int hop_limit) {
  SpreadEstimate est;
  est.simulations = counts.size();
  est.hop_limit = hop_limit;
  double sum = 0.0;
  for (auto c : counts) sum += c;
  est.mean = sum / static_cast<double>(counts.size());
  if (counts.size() > 1) {
    double ss = 0.0;
    for (auto c : counts) ss += (c - est.mean) * (c - est.mean);
    const double var = ss / static_cast<double>(counts.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(counts.size()));
  }
  return est;
}

void check_sims(std::size_t n_sims) {
  if (n_sims == 0) throw ConfigError("number of simulations must be at least 1");
}

}  // namespace

void SimScratch::resize(std::size_t nodes) {
  epoch_ = 0;
  active_.assign(nodes, 0);
  touched_.assign(nodes, 0);
  threshold_.assign(nodes, 0.0);
  weight_.assign(nodes, 0.0);
  frontier_.clear();
  next_.clear();
}

std::uint32_t SimScratch::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(active_.begin(), active_.end(), 0);
    std::fill(touched_.begin(), touched_.end(), 0);
    epoch_ = 1;
  }
  return epoch_;
}

std::size_t simulate_once(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                          int hop_limit, rng::Engine& eng, SimScratch& s) {
  if (s.active_.size() != g.node_count()) s.resize(g.node_count());
  const std::uint32_t epoch = s.next_epoch();
  s.frontier_.clear();
  for (NodeId v : seeds) {
    if (v >= g.node_count()) throw DataError("seed id " + std::to_string(v) + " out of range");
    if (s.active_[v] == epoch) continue;
    s.active_[v] = epoch;
    s.frontier_.push_back(v);
  }
  std::size_t active = s.frontier_.size();

  for (int level = 0; level < hop_limit && !s.frontier_.empty(); ++level) {
    s.next_.clear();
    for (NodeId u : s.frontier_) {
      auto nbrs = g.out_neighbors(u);
      auto probs = g.out_probs(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const NodeId v = nbrs[i];
        if (s.active_[v] == epoch) continue;
        if (model == Diffusion::ic) {
          if (rng::uniform01(eng) < probs[i]) {
            s.active_[v] = epoch;
            s.next_.push_back(v);
          }
        } else {
          if (s.touched_[v] != epoch) {
            s.touched_[v] = epoch;
            // Threshold in (0,1] so that P(threshold <= w) == w exactly.
            s.threshold_[v] = 1.0 - rng::uniform01(eng);
            s.weight_[v] = 0.0;
          }
          s.weight_[v] += probs[i];
          if (s.weight_[v] >= s.threshold_[v]) {
            s.active_[v] = epoch;
            s.next_.push_back(v);
          }
        }
      }
    }
    active += s.next_.size();
    s.frontier_.swap(s.next_);
  }
  return active;
}

SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                               int hop_limit, std::size_t n_sims, std::uint64_t rng_seed,
                               int workers) {
  check_sims(n_sims);
  check_seeds(g, seeds);
  check_hop_limit(hop_limit);
  std::vector<std::uint32_t> counts(n_sims);
  const auto total = static_cast<std::int64_t>(n_sims);
  const int threads = resolve_workers(workers);
#pragma omp parallel num_threads(threads)
  {
    SimScratch scratch(g.node_count());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < total; ++i) {
      auto eng = rng::substream(rng_seed, static_cast<std::uint64_t>(i));
      counts[i] = static_cast<std::uint32_t>(simulate_once(g, seeds, model, hop_limit, eng, scratch));
    }
  }
  return summarize(counts, hop_limit);
}

namespace serial {

SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model,
                               int hop_limit, std::size_t n_sims, std::uint64_t rng_seed) {
  check_sims(n_sims);
  check_seeds(g, seeds);
  check_hop_limit(hop_limit);
  std::vector<std::uint32_t> counts(n_sims);
  SimScratch scratch(g.node_count());
  for (std::size_t i = 0; i < n_sims; ++i) {
    auto eng = rng::substream(rng_seed, i);
    counts[i] = static_cast<std::uint32_t>(simulate_once(g, seeds, model, hop_limit, eng, scratch));
  }
  return summarize(counts, hop_limit);
}

}  // namespace serial

namespace {

double exact_ic(const Graph& g, const std::vector<std::uint8_t>& is_seed, int hop_limit) {
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  if (m > kMaxEnumeratedEdges) {
    throw DataError("exact IC enumeration limited to " + std::to_string(kMaxEnumeratedEdges) +
                    " edges, graph has " + std::to_string(m));
  }
  const std::size_t n = g.node_count();
  std::vector<int> depth(n);
  std::vector<NodeId> frontier, next;
  double expected = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double prob = 1.0;
    for (std::size_t e = 0; e < m && prob > 0.0; ++e) {
      prob *= (mask >> e) & 1 ? edges[e].p : 1.0 - edges[e].p;
    }
    if (prob == 0.0) continue;

    std::fill(depth.begin(), depth.end(), -1);
    frontier.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (is_seed[v]) {
        depth[v] = 0;
        frontier.push_back(v);
      }
    }
    std::size_t reached = frontier.size();
    for (int level = 0; level < hop_limit && !frontier.empty(); ++level) {
      next.clear();
      for (std::size_t e = 0; e < m; ++e) {
        if (!((mask >> e) & 1)) continue;
        const Edge& ed = edges[e];
        if (depth[ed.src] == level && depth[ed.dst] < 0) {
          depth[ed.dst] = level + 1;
          next.push_back(ed.dst);
        }
      }
      reached += next.size();
      frontier.swap(next);
    }
    expected += prob * static_cast<double>(reached);
  }
  return expected;
}

double exact_lt(const Graph& g, const std::vector<std::uint8_t>& is_seed, int hop_limit) {
  const std::size_t n = g.node_count();
  std::uint64_t outcomes = 1;
  for (NodeId v = 0; v < n; ++v) {
    outcomes *= g.in_degree(v) + 1;
    if (outcomes > kMaxLtOutcomes) {
      throw DataError("exact LT enumeration exceeds " + std::to_string(kMaxLtOutcomes) + " outcomes");
    }
  }
  std::vector<double> none_prob(n, 1.0);
  for (NodeId v = 0; v < n; ++v) {
    for (double b : g.in_probs(v)) none_prob[v] -= b;
    none_prob[v] = std::max(none_prob[v], 0.0);
  }
  // choice[v] == in_degree(v) means "no live in-edge".
  std::vector<std::size_t> choice(n, 0);
  const int max_steps = static_cast<int>(std::min<std::int64_t>(hop_limit, static_cast<std::int64_t>(n)));
  double expected = 0.0;
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    double prob = 1.0;
    for (NodeId v = 0; v < n && prob > 0.0; ++v) {
      const std::size_t d = g.in_degree(v);
      prob *= choice[v] == d ? none_prob[v] : g.in_probs(v)[choice[v]];
    }
    if (prob > 0.0) {
      std::size_t reached = 0;
      for (NodeId v = 0; v < n; ++v) {
        NodeId x = v;
        int steps = 0;
        while (!is_seed[x] && steps < max_steps && choice[x] < g.in_degree(x)) {
          x = g.in_neighbors(x)[choice[x]];
          ++steps;
        }
        if (is_seed[x]) ++reached;
      }
      expected += prob * static_cast<double>(reached);
    }
    for (NodeId v = 0; v < n; ++v) {
      if (++choice[v] <= g.in_degree(v)) break;
      choice[v] = 0;
    }
  }
  return expected;
}

}  // namespace

double exact_spread(const Graph& g, std::span<const NodeId> seeds, Diffusion model, int hop_limit) {
  check_seeds(g, seeds);
  check_hop_limit(hop_limit);
  if (seeds.empty()) return 0.0;
  std::vector<std::uint8_t> is_seed(g.node_count(), 0);
  for (NodeId s : seeds) is_seed[s] = 1;
  return model == Diffusion::ic ? exact_ic(g, is_seed, hop_limit) : exact_lt(g, is_seed, hop_limit);
}

OptimalSeedSet brute_force_optimal(const Graph& g, std::size_t k, Diffusion model, int hop_limit) {
  const std::size_t n = g.node_count();
  if (k > n) throw ConfigError("k exceeds node count");
  double subsets = 1.0;
  for (std::size_t i = 0; i < k; ++i) subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (subsets > 1e6) throw DataError("too many seed sets to enumerate");

  OptimalSeedSet best;
  best.spread = -1.0;
  std::vector<NodeId> combo(k);
  std::iota(combo.begin(), combo.end(), 0);
  while (true) {
    const double s = exact_spread(g, combo, model, hop_limit);
    if (s > best.spread + 1e-12) {
      best.spread = s;
      best.seeds = combo;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  if (k == 0) best.spread = 0.0;
  return best;
}

}  // namespace hopim
