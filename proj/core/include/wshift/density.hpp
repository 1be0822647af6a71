#pragma once

#include <cstdint>
#include <vector>

#include "wshift/distributions.hpp"

namespace wshift {

// A (base, bumped) pair of Holder densities whose W2 distance is certified
// against the per-observation budget via KL + Talagrand.
struct DensityShiftPair {
  HolderBumpDensity clean;    // sign = 0
  HolderBumpDensity shifted;  // sign = +-1
  double eps_certified = 0.0; // Talagrand upper bound on W2(clean, shifted)
  double x0 = 0.0;
  double pointwise_gap = 0.0; // |f2(x0) - f1(x0)| = L h^s T(0)
  double c_tilde = 0.0;       // KL constant: int T^2 / inf_{envelope} phi_sigma
  double amplitude = 0.0;     // certified bump amplitude a
};

// Builds the pair with bandwidth h = (eps / (2 sqrt(c_tilde) sigma L))^{2/(2s+1)}
// and certifies W2(clean, shifted) <= eps numerically.  Throws
// std::runtime_error carrying the realized bound when certification fails.
DensityShiftPair build_pair(double eps, double s, double big_l,
                            double sigma_base, double x0, int sign = 1);

struct KdeRiskPoint {
  long n = 0;
  double bandwidth = 0.0;
  double mean_risk = 0.0;
  double std_error = 0.0;
};

// Monte Carlo risk of the Gaussian KDE at x0 with bandwidth_select(n, s, eps):
// samples n points from pair.shifted, evaluates the KDE at x0, and scores the
// squared error against the clean density value f1(x0).
std::vector<KdeRiskPoint> kde_risk_curve(const DensityShiftPair& pair,
                                         const std::vector<long>& n_grid,
                                         long trials, std::uint64_t seed,
                                         double eps_for_bandwidth = 0.0);

// Ordinary least-squares slope of log(y) against log(x); used for rate checks
// on geometric grids.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wshift
