#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

namespace hopim::analysis {

struct ScaleFreeParams {
  double gamma = 3.0;       // power-law exponent
  double p = 0.0;           // uniform propagation probability
  double seed_ratio = 0.0;  // k / |V|
  std::size_t truncation = 1'000'000;
};

/// P0(d) ~ d^-gamma (node degree), P1(d) ~ d^(1-gamma) (degree of a neighbour).
enum class DegreeLaw { p0, p1 };

/// Normaliser sum_{d>=1} d^-s: the first `truncation` terms plus an
/// Euler-Maclaurin estimate of the remainder.
double zeta_normalizer(double s, std::size_t truncation);
/// Integral-test upper bound on the dropped remainder sum_{d>D} d^-s.
double zeta_tail_bound(double s, std::size_t truncation);

double degree_dist(const ScaleFreeParams& params, DegreeLaw law, std::size_t d);

/// Lower bound on E[sigma_h]/E[sigma] for scale-free graphs with uniform p,
/// clamped to [0,1]. Throws DataError on a degenerate denominator.
double alpha_lower_bound(const ScaleFreeParams& params);

/// Expected one-hop spread lower bound (p+1)k - p k^2 / n.
double one_hop_expected_lb(double p, double n, double k);

struct ExpectedFraction {
  double phi = 0.0;     // expected activated fraction
  double varphi = 0.0;  // instrumental variable of the fixed point
  std::size_t iterations = 0;
  bool damped = false;
};

/// Fixed point of
///   1 - varphi = (1 - r) sum_{d>=0} P1(d+1) (1 - p varphi)^d
///   1 - phi    = (1 - r) sum_{d>=1} P0(d)   (1 - p varphi)^d
/// iterated from varphi = r until |delta| < 1e-12 (at most 1e5 steps).
ExpectedFraction solve_expected_fraction(const ScaleFreeParams& params);

struct FixedPointResidual {
  double varphi_equation;
  double phi_equation;
};
FixedPointResidual expected_fraction_residual(const ScaleFreeParams& params, double phi, double varphi);

/// (1 - 1/e) * alpha.
double guarantee_factor(double alpha);

struct SurfacePoint {
  double p;
  double seed_ratio;
  double alpha;
};

struct SurfaceGrid {
  double gamma = 3.0;
  double p_max = 0.1;
  std::size_t p_steps = 21;
  double ratio_max = 0.5;
  std::size_t ratio_steps = 21;
  std::size_t truncation = 1'000'000;
};

/// alpha over an evenly spaced p x seed_ratio grid, p-major order.
std::vector<SurfacePoint> alpha_surface(const SurfaceGrid& grid, int workers = 0);
namespace serial {
std::vector<SurfacePoint> alpha_surface(const SurfaceGrid& grid);
}

/// CSV with header "p,seed_ratio,alpha", 10 significant digits.
void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& points);

}  // namespace hopim::analysis
