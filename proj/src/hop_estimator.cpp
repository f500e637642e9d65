#include "hopim/hop_estimator.hpp"

#include <algorithm>
#include <string>

#include "hopim/error.hpp"

namespace hopim {

namespace {

// Below this the two-hop update factor is 0/0-prone; q2 is rebuilt from the in-edges instead.
constexpr double kDenominatorGuard = 1e-12;

// Survival factor of one in-edge (w,v) given w's one-hop survival q1w.
inline double edge_survival(double p, double q1w) { return (1.0 - p) + p * q1w; }

}  // namespace

const char* to_string(Diffusion d) { return d == Diffusion::ic ? "ic" : "lt"; }

HopState::HopState(const Graph& g, const HopConfig& cfg) : g_(&g), cfg_(cfg) {
  if (cfg.hops != 1 && cfg.hops != 2) {
    throw ConfigError("exact hop estimation supports hops in {1,2}, got " + std::to_string(cfg.hops));
  }
  if (cfg.model == Diffusion::lt) {
    auto bad = validate_lt(g);
    if (!bad.empty()) {
      throw DataError("graph violates the LT weight constraint at " + std::to_string(bad.size()) +
                      " node(s), first " + std::to_string(bad.front()));
    }
  }
  const std::size_t n = g.node_count();
  seed_.assign(n, 0);
  q1_.assign(n, 1.0);
  if (cfg.hops == 2) q2_.assign(n, 1.0);
}

TouchedNode& HopState::touch(NodeId v, EvalScratch& s) const {
  if (s.slot_[v] < 0) {
    s.slot_[v] = static_cast<std::int32_t>(s.touched_.size());
    s.touched_.push_back({v, q1_[v], cfg_.hops == 2 ? q2_[v] : 0.0});
  }
  return s.touched_[s.slot_[v]];
}

GainReport HopState::eval_gain(NodeId u) const {
  EvalScratch scratch;
  return eval_gain(u, scratch);
}

GainReport HopState::eval_gain(NodeId u, EvalScratch& s) const {
  const std::size_t n = g_->node_count();
  if (u >= n) throw DataError("candidate " + std::to_string(u) + " out of range");
  if (seed_[u]) throw DataError("candidate " + std::to_string(u) + " is already a seed");
  if (s.slot_.size() != n) {
    s.slot_.assign(n, -1);
    s.recompute_.assign(n, 0);
  }
  s.touched_.clear();

  TouchedNode& self = touch(u, s);
  self.q1 = 0.0;
  self.q2 = 0.0;

  if (cfg_.model == Diffusion::lt) {
    eval_lt(u, s);
  } else if (cfg_.hops == 1) {
    eval_ic1(u, s);
  } else {
    eval_ic2(u, s);
  }

  GainReport report;
  report.candidate = u;
  report.state_version = version_;
  double gain = 0.0;
  for (const TouchedNode& t : s.touched_) {
    gain += cfg_.hops == 1 ? q1_[t.node] - t.q1 : q2_[t.node] - t.q2;
    s.slot_[t.node] = -1;
    s.recompute_[t.node] = 0;
  }
  report.gain = std::max(gain, 0.0);
  report.touched.assign(s.touched_.begin(), s.touched_.end());
  return report;
}

void HopState::eval_ic1(NodeId u, EvalScratch& s) const {
  auto nbrs = g_->out_neighbors(u);
  auto probs = g_->out_probs(u);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NodeId w = nbrs[i];
    if (seed_[w]) continue;
    touch(w, s).q1 = q1_[w] * (1.0 - probs[i]);
  }
}

void HopState::eval_ic2(NodeId u, EvalScratch& s) const {
  const double q1u_old = q1_[u];
  auto nbrs = g_->out_neighbors(u);
  auto probs = g_->out_probs(u);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NodeId w = nbrs[i];
    if (seed_[w]) continue;
    const double p = probs[i];
    touch(w, s);
    {
      TouchedNode& tw = s.touched_[s.slot_[w]];
      tw.q1 = q1_[w] * (1.0 - p);
      // u's own one-hop probability jumps to 1: adjust w's direct term.
      const double den = edge_survival(p, q1u_old);
      if (den < kDenominatorGuard) {
        s.recompute_[w] = 1;
      } else if (!s.recompute_[w]) {
        tw.q2 *= (1.0 - p) / den;
      }
    }
    const double q1w_old = q1_[w];
    const double q1w_new = s.touched_[s.slot_[w]].q1;
    if (q1w_new == q1w_old) continue;

    auto nbrs2 = g_->out_neighbors(w);
    auto probs2 = g_->out_probs(w);
    for (std::size_t j = 0; j < nbrs2.size(); ++j) {
      const NodeId v = nbrs2[j];
      if (v == u || seed_[v]) continue;
      const double pv = probs2[j];
      TouchedNode& tv = touch(v, s);
      const double den = edge_survival(pv, q1w_old);
      if (den < kDenominatorGuard) {
        s.recompute_[v] = 1;
      } else if (!s.recompute_[v]) {
        tv.q2 *= edge_survival(pv, q1w_new) / den;
      }
    }
  }
  for (TouchedNode& t : s.touched_) {
    if (s.recompute_[t.node]) t.q2 = fresh_q2_ic(t.node, u, s);
  }
}

double HopState::fresh_q2_ic(NodeId v, NodeId u, const EvalScratch& s) const {
  auto srcs = g_->in_neighbors(v);
  auto probs = g_->in_probs(v);
  double q = 1.0;
  for (std::size_t i = 0; i < srcs.size(); ++i) {
    const NodeId x = srcs[i];
    double q1x;
    if (x == u || seed_[x]) {
      q1x = 0.0;
    } else if (s.slot_[x] >= 0) {
      q1x = s.touched_[s.slot_[x]].q1;
    } else {
      q1x = q1_[x];
    }
    q *= edge_survival(probs[i], q1x);
  }
  return q;
}

void HopState::eval_lt(NodeId u, EvalScratch& s) const {
  const bool two = cfg_.hops == 2;
  const double q1u = q1_[u];
  auto nbrs = g_->out_neighbors(u);
  auto weights = g_->out_probs(u);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NodeId v = nbrs[i];
    if (seed_[v]) continue;
    const double b = weights[i];
    {
      TouchedNode& tv = touch(v, s);
      tv.q1 -= b;
      if (two) tv.q2 -= b * q1u;
    }
    if (!two || b == 0.0) continue;
    auto nbrs2 = g_->out_neighbors(v);
    auto weights2 = g_->out_probs(v);
    for (std::size_t j = 0; j < nbrs2.size(); ++j) {
      const NodeId x = nbrs2[j];
      if (x == u || seed_[x]) continue;
      touch(x, s).q2 -= weights2[j] * b;
    }
  }
  for (TouchedNode& t : s.touched_) {
    t.q1 = std::max(t.q1, 0.0);
    t.q2 = std::max(t.q2, 0.0);
  }
}

void HopState::commit(const GainReport& r) {
  if (r.state_version != version_) {
    throw DataError("stale gain report for candidate " + std::to_string(r.candidate));
  }
  if (r.candidate >= seed_.size() || seed_[r.candidate]) {
    throw DataError("gain report candidate " + std::to_string(r.candidate) + " is not a valid new seed");
  }
  for (const TouchedNode& t : r.touched) {
    q1_[t.node] = t.q1;
    if (cfg_.hops == 2) q2_[t.node] = t.q2;
  }
  seed_[r.candidate] = 1;
  seeds_.push_back(r.candidate);
  sigma_ += r.gain;
  ++version_;
  if (cfg_.refresh_interval != 0 && ++commits_since_refresh_ >= cfg_.refresh_interval) refresh();
}

double HopState::add_seed(NodeId u) {
  GainReport r = eval_gain(u);
  commit(r);
  return r.gain;
}

double HopState::activation(NodeId v, int hop) const {
  if (hop == 1) return 1.0 - q1_[v];
  if (hop == 2 && cfg_.hops == 2) return 1.0 - q2_[v];
  throw ConfigError("state does not track " + std::to_string(hop) + "-hop probabilities");
}

double HopState::spread_from_arrays() const {
  const auto& q = cfg_.hops == 1 ? q1_ : q2_;
  double total = 0.0;
  for (double x : q) total += 1.0 - x;
  return total;
}

void HopState::refresh() {
  const std::size_t n = g_->node_count();
  if (cfg_.model == Diffusion::ic) {
    for (NodeId v = 0; v < n; ++v) {
      if (seed_[v]) {
        q1_[v] = 0.0;
        continue;
      }
      auto srcs = g_->in_neighbors(v);
      auto probs = g_->in_probs(v);
      double q = 1.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        if (seed_[srcs[i]]) q *= 1.0 - probs[i];
      }
      q1_[v] = q;
    }
    if (cfg_.hops == 2) {
      for (NodeId v = 0; v < n; ++v) {
        if (seed_[v]) {
          q2_[v] = 0.0;
          continue;
        }
        auto srcs = g_->in_neighbors(v);
        auto probs = g_->in_probs(v);
        double q = 1.0;
        for (std::size_t i = 0; i < srcs.size(); ++i) q *= edge_survival(probs[i], q1_[srcs[i]]);
        q2_[v] = q;
      }
    }
  } else {
    for (NodeId v = 0; v < n; ++v) {
      if (seed_[v]) {
        q1_[v] = 0.0;
        continue;
      }
      auto srcs = g_->in_neighbors(v);
      auto w = g_->in_probs(v);
      double pi = 0.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        if (seed_[srcs[i]]) pi += w[i];
      }
      q1_[v] = std::max(1.0 - pi, 0.0);
    }
    if (cfg_.hops == 2) {
      for (NodeId v = 0; v < n; ++v) {
        if (seed_[v]) {
          q2_[v] = 0.0;
          continue;
        }
        auto srcs = g_->in_neighbors(v);
        auto w = g_->in_probs(v);
        double pi = 0.0;
        for (std::size_t i = 0; i < srcs.size(); ++i) pi += w[i] * (1.0 - q1_[srcs[i]]);
        q2_[v] = std::max(1.0 - pi, 0.0);
      }
    }
  }
  sigma_ = spread_from_arrays();
  commits_since_refresh_ = 0;
}

HopProbabilities closed_form_probabilities(const Graph& g, std::span<const NodeId> seeds,
                                           Diffusion model) {
  std::vector<std::uint8_t> is_seed(g.node_count(), 0);
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw DataError("seed " + std::to_string(s) + " out of range");
    is_seed[s] = 1;
  }
  HopProbabilities out;
  out.pi1.assign(g.node_count(), 0.0);
  out.pi2.assign(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (is_seed[v]) {
      out.pi1[v] = 1.0;
      continue;
    }
    auto srcs = g.in_neighbors(v);
    auto probs = g.in_probs(v);
    if (model == Diffusion::ic) {
      double q = 1.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        if (is_seed[srcs[i]]) q *= 1.0 - probs[i];
      }
      out.pi1[v] = 1.0 - q;
    } else {
      double pi = 0.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        if (is_seed[srcs[i]]) pi += probs[i];
      }
      out.pi1[v] = pi;
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (is_seed[v]) {
      out.pi2[v] = 1.0;
      continue;
    }
    auto srcs = g.in_neighbors(v);
    auto probs = g.in_probs(v);
    if (model == Diffusion::ic) {
      double q = 1.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) q *= 1.0 - probs[i] * out.pi1[srcs[i]];
      out.pi2[v] = 1.0 - q;
    } else {
      double pi = 0.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) pi += probs[i] * out.pi1[srcs[i]];
      out.pi2[v] = pi;
    }
  }
  return out;
}

}  // namespace hopim
