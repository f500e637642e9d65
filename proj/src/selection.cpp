#include "hopim/selection.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "hopim/bounds.hpp"
#include "hopim/error.hpp"
#include "hopim/parallel.hpp"

namespace hopim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_k(const Graph& g, std::size_t k, bool allow_zero = false) {
  if ((!allow_zero && k == 0) || k > g.node_count()) {
    throw ConfigError("k = " + std::to_string(k) + " outside [1, " + std::to_string(g.node_count()) + "]");
  }
}

std::string estimator_name(const HopConfig& cfg, const char* suffix) {
  std::string name = cfg.hops == 1 ? "onehop" : "twohop";
  name += suffix;
  if (cfg.model == Diffusion::lt) name += "-lt";
  return name;
}

struct CelfEntry {
  double cached_gain;
  NodeId node;
  std::int64_t evaluated_at;  // round index; -1 = upper bound only
};

// std::priority_queue keeps the "largest" on top, so "less" means "ranks after".
struct RanksAfter {
  bool operator()(const CelfEntry& a, const CelfEntry& b) const {
    return ranks_before(b.cached_gain, b.node, a.cached_gain, a.node);
  }
};

}  // namespace

std::vector<double> first_round_gains(const HopState& state, int workers) {
  const auto n = static_cast<std::int64_t>(state.graph().node_count());
  std::vector<double> gains(state.graph().node_count(), -1.0);
  const int threads = resolve_workers(workers);
#pragma omp parallel num_threads(threads)
  {
    EvalScratch scratch;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t u = 0; u < n; ++u) {
      const auto node = static_cast<NodeId>(u);
      if (!state.is_seed(node)) gains[u] = state.eval_gain(node, scratch).gain;
    }
  }
  return gains;
}

namespace serial {

std::vector<double> first_round_gains(const HopState& state) {
  std::vector<double> gains(state.graph().node_count(), -1.0);
  EvalScratch scratch;
  for (NodeId u = 0; u < gains.size(); ++u) {
    if (!state.is_seed(u)) gains[u] = state.eval_gain(u, scratch).gain;
  }
  return gains;
}

}  // namespace serial

SeedResult greedy_celf(const Graph& g, const HopConfig& estimator, std::size_t k,
                       Bootstrap bootstrap, int workers) {
  check_k(g, k);
  if (bootstrap == Bootstrap::upper_bounds && estimator.model != Diffusion::ic) {
    throw ConfigError("upper-bound bootstrap is only valid under IC");
  }
  const auto start = Clock::now();
  HopState state(g, estimator);
  SeedResult result;
  result.algorithm = estimator_name(estimator, bootstrap == Bootstrap::none ? "-o" : "");

  std::priority_queue<CelfEntry, std::vector<CelfEntry>, RanksAfter> queue;
  {
    std::vector<CelfEntry> initial(g.node_count());
    if (bootstrap == Bootstrap::none) {
      const auto gains = first_round_gains(state, workers);
      result.evaluations += g.node_count();
      for (NodeId v = 0; v < g.node_count(); ++v) initial[v] = {gains[v], v, 0};
    } else {
      const auto bounds = upper_bounds(g, estimator.hops, workers);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        // Slack keeps the bound valid against last-ulp differences from eval_gain.
        const double b = bounds.values[v];
        initial[v] = {b + 1e-12 * (1.0 + b), v, -1};
      }
    }
    queue = decltype(queue)(RanksAfter{}, std::move(initial));
  }

  EvalScratch scratch;
  std::unordered_map<NodeId, GainReport> pending;  // reports computed this round
  std::int64_t round = 0;
  while (result.seeds.size() < k) {
    CelfEntry top = queue.top();
    queue.pop();
    if (top.evaluated_at == round) {
      auto it = pending.find(top.node);
      GainReport report;
      if (it != pending.end()) {
        report = std::move(it->second);
      } else {
        report = state.eval_gain(top.node, scratch);
        ++result.evaluations;
      }
      state.commit(report);
      result.seeds.push_back(top.node);
      result.marginal_gains.push_back(report.gain);
      pending.clear();
      ++round;
      continue;
    }
    GainReport report = state.eval_gain(top.node, scratch);
    ++result.evaluations;
    top.cached_gain = report.gain;
    top.evaluated_at = round;
    if (queue.empty() || ranks_before(top.cached_gain, top.node, queue.top().cached_gain, queue.top().node)) {
      state.commit(report);
      result.seeds.push_back(top.node);
      result.marginal_gains.push_back(report.gain);
      pending.clear();
      ++round;
      continue;
    }
    pending.emplace(top.node, std::move(report));
    queue.push(top);
  }
  result.elapsed_seconds = seconds_since(start);
  return result;
}

SeedResult greedy_naive(const Graph& g, const HopConfig& estimator, std::size_t k) {
  check_k(g, k);
  const auto start = Clock::now();
  HopState state(g, estimator);
  SeedResult result;
  result.algorithm = estimator_name(estimator, "-naive");
  EvalScratch scratch;
  for (std::size_t round = 0; round < k; ++round) {
    GainReport best;
    bool have = false;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (state.is_seed(u)) continue;
      GainReport r = state.eval_gain(u, scratch);
      ++result.evaluations;
      if (!have || ranks_before(r.gain, u, best.gain, best.candidate)) {
        best = std::move(r);
        have = true;
      }
    }
    state.commit(best);
    result.seeds.push_back(best.candidate);
    result.marginal_gains.push_back(best.gain);
  }
  result.elapsed_seconds = seconds_since(start);
  return result;
}

SeedResult high_degree(const Graph& g, std::size_t k, DegreeKind kind) {
  check_k(g, k, true);
  const auto start = Clock::now();
  auto degree = [&](NodeId v) -> std::size_t {
    switch (kind) {
      case DegreeKind::out:
        return g.out_degree(v);
      case DegreeKind::in:
        return g.in_degree(v);
      case DegreeKind::total:
        return g.out_degree(v) + g.in_degree(v);
    }
    return 0;
  };
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](NodeId a, NodeId b) {
                      const auto da = degree(a), db = degree(b);
                      return da != db ? da > db : a < b;
                    });
  SeedResult result;
  result.algorithm = "highdegree";
  result.seeds.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  result.elapsed_seconds = seconds_since(start);
  return result;
}

SeedResult degree_discount(const Graph& g, std::size_t k, double p) {
  check_k(g, k, true);
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("degree-discount p outside [0,1]");
  const auto start = Clock::now();
  const std::size_t n = g.node_count();
  std::vector<double> dd(n);
  std::vector<std::size_t> t(n, 0);
  std::vector<std::uint8_t> chosen(n, 0);

  auto key_less = [](const std::pair<double, NodeId>& a, const std::pair<double, NodeId>& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::set<std::pair<double, NodeId>, decltype(key_less)> ranking(key_less);
  for (NodeId v = 0; v < n; ++v) {
    dd[v] = static_cast<double>(g.out_degree(v));
    ranking.insert({dd[v], v});
  }

  SeedResult result;
  result.algorithm = "degreediscount";
  while (result.seeds.size() < k) {
    const NodeId u = ranking.begin()->second;
    ranking.erase(ranking.begin());
    chosen[u] = 1;
    result.seeds.push_back(u);
    for (NodeId v : g.out_neighbors(u)) {
      if (chosen[v]) continue;
      ranking.erase({dd[v], v});
      ++t[v];
      const double d = static_cast<double>(g.out_degree(v));
      const double tv = static_cast<double>(t[v]);
      dd[v] = d - 2.0 * tv - (d - tv) * tv * p;
      ranking.insert({dd[v], v});
    }
  }
  result.elapsed_seconds = seconds_since(start);
  return result;
}

}  // namespace hopim
