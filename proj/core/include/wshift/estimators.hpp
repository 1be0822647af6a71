#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wshift/distributions.hpp"

namespace wshift {

struct SampleMean {};
struct CoordinatewiseMedian {};

// theta_hat_k = (X_(k) + X_(n-k+1)) / 2.
struct Midrange {
  int k = 1;
};

// Selects Midrange{1} when eps <= C_U(n) and the sample mean otherwise.
struct SwitchingUniform {
  double eps = 0.0;
};

struct LeastSquares {
  Mat design;
};

struct GeneralizedLeastSquares {
  Mat design;
  Mat noise_cov;
};

enum class Kernel { Gaussian, Epanechnikov };

// Kernel density estimate evaluated at a single point x0.
struct KernelDensityAt {
  double x0 = 0.0;
  double bandwidth = 1.0;
  Kernel kernel = Kernel::Gaussian;
};

// Numerical Pitman (location-equivariant Bayes under flat prior) estimator
// for a 1-D location family with the given base density (centered at 0).
struct Pitman1D {
  std::shared_ptr<const DistributionSpec> base_density;
  double quad_tol = 1e-9;
};

using EstimatorSpec =
    std::variant<SampleMean, CoordinatewiseMedian, Midrange, SwitchingUniform,
                 LeastSquares, GeneralizedLeastSquares, KernelDensityAt,
                 Pitman1D>;

// Point estimate: a p-vector for location/regression estimators, a 1-vector
// for scalar locations and for the KDE value at x0.
Vec estimate(const EstimatorSpec& spec, const Mat& sample);

// Switching threshold C_U(n) of the uniform-location problem; C_U(1) = 0.
double switching_threshold(int n);

// KDE bandwidth rule h = max(n^{-1/(2s+1)}, eps^{1/(s+2)}).
double bandwidth_select(double n, double s, double eps);

struct EstimatorEntry {
  std::string label;
  EstimatorSpec spec;
};

std::vector<EstimatorEntry> location_estimator_catalog();
std::vector<EstimatorEntry> lr_estimator_catalog(const Mat& design,
                                                 const Mat& noise_cov);
std::vector<EstimatorEntry> uniform_estimator_catalog(int n);

}  // namespace wshift
