#include "hopim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hopim/error.hpp"
#include "hopim/parallel.hpp"

namespace hopim::analysis {

namespace {

constexpr double kFixedPointTolerance = 1e-12;
constexpr std::size_t kMaxIterations = 100'000;
constexpr double kDegenerateDenominator = 1e-15;

// Terms d^-s for d = 1..D, cached per (s, D). A power-law series is needed by
// every fixed-point iteration, so recomputing pow() a million times per step
// would dominate.
struct PowerTable {
  std::vector<double> terms;  // terms[d-1] = d^-s
  double normalizer = 0.0;
  double tail_estimate = 0.0;
};

std::shared_ptr<const PowerTable> power_table(double s, std::size_t truncation) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const PowerTable>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(s, truncation);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto table = std::make_shared<PowerTable>();
  table->terms.resize(truncation);
  for (std::size_t d = 1; d <= truncation; ++d) table->terms[d - 1] = std::pow(static_cast<double>(d), -s);
  double sum = 0.0;
  for (std::size_t i = truncation; i-- > 0;) sum += table->terms[i];  // small terms first
  const double D = static_cast<double>(truncation);
  table->tail_estimate = std::pow(D, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(D, -s) + s / 12.0 * std::pow(D, -s - 1.0);
  table->normalizer = sum + table->tail_estimate;
  cache.emplace(key, table);
  return table;
}

double law_exponent(double gamma, DegreeLaw law) { return law == DegreeLaw::p0 ? gamma : gamma - 1.0; }

void check_params(const ScaleFreeParams& prm, bool need_p1) {
  if (!(prm.gamma > 1.0)) throw ConfigError("gamma must exceed 1 for P0 to normalise");
  if (need_p1 && !(prm.gamma > 2.0)) throw ConfigError("gamma must exceed 2 for P1 to normalise");
  if (!(prm.p >= 0.0 && prm.p <= 1.0)) throw ConfigError("p outside [0,1]");
  if (!(prm.seed_ratio >= 0.0 && prm.seed_ratio <= 1.0)) throw ConfigError("seed ratio outside [0,1]");
  if (prm.truncation < 1000) throw ConfigError("truncation must be at least 1000");
}

// sum_{d=1..D} d^-s x^(d-1+shift) / Z, remainder approximated by tail * x^D.
double weighted_series(const PowerTable& t, double x, int shift) {
  double acc = 0.0;
  double xp = shift == 0 ? 1.0 : x;
  for (double term : t.terms) {
    acc += term * xp;
    xp *= x;
    if (xp < 1e-300) {
      xp = 0.0;
      break;
    }
  }
  acc += t.tail_estimate * xp;
  return acc / t.normalizer;
}

}  // namespace

double zeta_normalizer(double s, std::size_t truncation) {
  if (!(s > 1.0)) throw ConfigError("zeta sum diverges for exponent <= 1");
  return power_table(s, truncation)->normalizer;
}

double zeta_tail_bound(double s, std::size_t truncation) {
  if (!(s > 1.0)) throw ConfigError("zeta sum diverges for exponent <= 1");
  return std::pow(static_cast<double>(truncation), 1.0 - s) / (s - 1.0);
}

double degree_dist(const ScaleFreeParams& params, DegreeLaw law, std::size_t d) {
  check_params(params, law == DegreeLaw::p1);
  if (d < 1) throw ConfigError("degree must be at least 1");
  const double s = law_exponent(params.gamma, law);
  return std::pow(static_cast<double>(d), -s) / zeta_normalizer(s, params.truncation);
}

double alpha_lower_bound(const ScaleFreeParams& prm) {
  check_params(prm, true);
  const double r = prm.seed_ratio;
  const double p0_1 = degree_dist(prm, DegreeLaw::p0, 1);
  const double p1_1 = degree_dist(prm, DegreeLaw::p1, 1);
  const double a = 1.0 - (1.0 - r) * p1_1;
  const double numerator = 1.0 - (1.0 - r) * (1.0 - prm.p * r);
  const double denominator = 1.0 - (1.0 - r) * p0_1 * (1.0 - prm.p * a);
  if (!(std::abs(denominator) > kDegenerateDenominator)) {
    throw DataError("degenerate alpha denominator at p=" + std::to_string(prm.p) +
                    ", seed_ratio=" + std::to_string(r));
  }
  return std::clamp(numerator / denominator, 0.0, 1.0);
}

double one_hop_expected_lb(double p, double n, double k) {
  if (!(n > 0.0) || k < 0.0 || k > n) throw ConfigError("one-hop bound needs 0 <= k <= n, n > 0");
  return (p + 1.0) * k - p * k * k / n;
}

FixedPointResidual expected_fraction_residual(const ScaleFreeParams& prm, double phi, double varphi) {
  check_params(prm, true);
  const auto t0 = power_table(law_exponent(prm.gamma, DegreeLaw::p0), prm.truncation);
  const auto t1 = power_table(law_exponent(prm.gamma, DegreeLaw::p1), prm.truncation);
  const double x = 1.0 - prm.p * varphi;
  const double keep = 1.0 - prm.seed_ratio;
  return {(1.0 - varphi) - keep * weighted_series(*t1, x, 0),
          (1.0 - phi) - keep * weighted_series(*t0, x, 1)};
}

ExpectedFraction solve_expected_fraction(const ScaleFreeParams& prm) {
  check_params(prm, true);
  const auto t0 = power_table(law_exponent(prm.gamma, DegreeLaw::p0), prm.truncation);
  const auto t1 = power_table(law_exponent(prm.gamma, DegreeLaw::p1), prm.truncation);
  const double keep = 1.0 - prm.seed_ratio;
  auto map = [&](double varphi) { return 1.0 - keep * weighted_series(*t1, 1.0 - prm.p * varphi, 0); };

  ExpectedFraction out;
  double varphi = prm.seed_ratio;
  double damping = 1.0;
  double prev_delta = 0.0;
  for (out.iterations = 1; out.iterations <= kMaxIterations; ++out.iterations) {
    const double target = map(varphi);
    const double delta = target - varphi;
    // Sign flip without shrinking: oscillating, switch to half steps.
    if (damping == 1.0 && prev_delta * delta < 0.0 && std::abs(delta) >= std::abs(prev_delta)) {
      damping = 0.5;
      out.damped = true;
    }
    varphi = std::clamp(varphi + damping * delta, 0.0, 1.0);
    prev_delta = delta;
    if (std::abs(delta) < kFixedPointTolerance) break;
  }
  if (out.iterations > kMaxIterations) throw DataError("expected-fraction fixed point did not converge");
  out.varphi = varphi;
  out.phi = std::clamp(1.0 - keep * weighted_series(*t0, 1.0 - prm.p * varphi, 1), 0.0, 1.0);
  return out;
}

double guarantee_factor(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha outside [0,1]");
  return (1.0 - std::exp(-1.0)) * alpha;
}

namespace {

SurfacePoint surface_point(const SurfaceGrid& grid, std::size_t i, std::size_t j) {
  auto axis = [](double max, std::size_t steps, std::size_t idx) {
    return steps <= 1 ? 0.0 : max * static_cast<double>(idx) / static_cast<double>(steps - 1);
  };
  ScaleFreeParams prm;
  prm.gamma = grid.gamma;
  prm.p = axis(grid.p_max, grid.p_steps, i);
  prm.seed_ratio = axis(grid.ratio_max, grid.ratio_steps, j);
  prm.truncation = grid.truncation;
  return {prm.p, prm.seed_ratio, alpha_lower_bound(prm)};
}

void check_grid(const SurfaceGrid& grid) {
  if (grid.p_steps == 0 || grid.ratio_steps == 0) throw ConfigError("surface grid needs at least one step per axis");
  if (!(grid.p_max >= 0.0 && grid.p_max <= 1.0)) throw ConfigError("p range outside [0,1]");
  if (!(grid.ratio_max >= 0.0 && grid.ratio_max <= 1.0)) throw ConfigError("seed ratio range outside [0,1]");
}

}  // namespace

std::vector<SurfacePoint> alpha_surface(const SurfaceGrid& grid, int workers) {
  check_grid(grid);
  // Warm the normaliser cache outside the parallel region.
  surface_point(grid, 0, 0);
  const auto total = static_cast<std::int64_t>(grid.p_steps * grid.ratio_steps);
  std::vector<SurfacePoint> points(static_cast<std::size_t>(total));
  const int threads = resolve_workers(workers);
#pragma omp parallel for num_threads(threads)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / grid.ratio_steps;
    const auto j = static_cast<std::size_t>(idx) % grid.ratio_steps;
    points[idx] = surface_point(grid, i, j);
  }
  return points;
}

namespace serial {

std::vector<SurfacePoint> alpha_surface(const SurfaceGrid& grid) {
  check_grid(grid);
  std::vector<SurfacePoint> points;
  points.reserve(grid.p_steps * grid.ratio_steps);
  for (std::size_t i = 0; i < grid.p_steps; ++i) {
    for (std::size_t j = 0; j < grid.ratio_steps; ++j) points.push_back(surface_point(grid, i, j));
  }
  return points;
}

}  // namespace serial

void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& points) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "p,seed_ratio,alpha\n" << std::setprecision(10);
  out.unsetf(std::ios::floatfield);
  for (const auto& pt : points) out << pt.p << ',' << pt.seed_ratio << ',' << pt.alpha << '\n';
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace hopim::analysis
