#pragma once

#include <Eigen/Dense>

#include <variant>

#include "wshift/rng.hpp"

namespace wshift {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Clean data-generating laws.
// ---------------------------------------------------------------------------

// i.i.d. N(theta, sigma_cov) in R^p.
struct GaussianLocation {
  Vec theta;
  Mat sigma_cov;
};

// i.i.d. Unif[theta - 1/2, theta + 1/2].
struct UniformLocation {
  double theta = 0.0;
};

// Uniform law with Gaussian-smoothed edges: density 1 on |x-theta| <= 1/2-tau
// and (1/K(0)) K((|x-theta| - (1/2-tau)) / (2 tau K(0))) outside, where K is
// the standard Gaussian kernel.  tau in (0, 1/2].
struct SmoothedUniform {
  double theta = 0.0;
  double tau = 0.25;
};

// Gaussian base of scale sigma_base (mean zero) plus a signed Holder-smooth
// bump of height L h^s at x0:  f(x) = phi_sigma(x) + sign * L h^s T((x-x0)/h)
// with T(u) = K_b(u) - K_b(u-1) and K_b(u) = a exp(-1/(1-(2u)^2)) 1{|2u|<=1}.
// The amplitude a is calibrated so K_b lies in the Holder class Sigma(s, 1/4).
// sign = 0 gives the unbumped Gaussian.
struct HolderBumpDensity {
  double x0 = 0.0;
  double s = 2.0;          // Holder exponent
  double big_l = 3.0;      // Holder constant L
  double sigma_base = 2.0; // base Gaussian scale
  double h = 0.5;          // bump bandwidth
  int sign = 0;            // -1, 0, +1
};

// Fixed-design linear model Y = X theta + E, E ~ N(0, noise_cov), Y in R^n.
struct LinearModel {
  Mat design;     // n x p, full column rank
  Vec theta;      // p
  Mat noise_cov;  // n x n, symmetric positive definite
};

using DistributionSpec = std::variant<GaussianLocation, UniformLocation,
                                      SmoothedUniform, HolderBumpDensity,
                                      LinearModel>;

// Throws std::invalid_argument when a spec violates its invariants
// (non-PSD covariance, tau out of range, rank-deficient design, ...).
void validate(const DistributionSpec& spec);

// True location / regression parameter as a vector (scalar laws: length 1).
// HolderBumpDensity has no location parameter and returns an empty vector.
Vec true_parameter(const DistributionSpec& spec);

// Dimension of one observation row (LinearModel: rows are the n coordinates
// of the single draw Y, so the row dimension is 1).
int observation_dim(const DistributionSpec& spec);

bool is_scalar(const DistributionSpec& spec);

// Half-width of the interval around the law's center outside which the
// density is below 1e-16 (exact for compactly supported laws).
double effective_halfwidth(const DistributionSpec& spec);
double center(const DistributionSpec& spec);

// n i.i.d. rows (LinearModel: requires n == design rows and returns the
// single draw Y as an n x 1 matrix).  Deterministic given the stream state.
Mat sample(const DistributionSpec& spec, int n, RngStream& rng);

// Scalar-law density / CDF / quantile.  GaussianLocation participates when
// p == 1.  Throws std::invalid_argument for non-scalar variants and
// std::domain_error for q outside (0, 1).
double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);
double quantile(const DistributionSpec& spec, double q);

// Fisher information of the smoothed uniform family: closed form pi/tau, and
// a quadrature companion evaluating (1/(tau K(0)^2)) Int_0^inf K'(y)^2/K(y) dy.
double fisher_info_smoothed_uniform(double tau);
double fisher_info_smoothed_uniform_numeric(double tau);

// Bump-construction helpers shared with the density experiments.
double bump_amplitude(double s);            // certified Sigma(s, 1/4) amplitude
double bump_kernel(double s, double u);     // K_b(u)
double bump_t(double s, double u);          // T(u) = K_b(u) - K_b(u-1)
double bump_t_integral(double s, double u); // Int_{-1/2}^{u} T(v) dv

}  // namespace wshift
