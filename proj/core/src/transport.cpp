#include "wshift/transport.hpp"

#include "wshift/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace wshift {

namespace {

// Symmetric PSD square root via eigendecomposition, eigenvalues floored at 0.
Mat psd_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw std::invalid_argument("w2_gaussian: covariance not PSD");
  }
  Vec r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double w2_gaussian(const Vec& mu1, const Mat& cov1, const Vec& mu2,
                   const Mat& cov2) {
  if (mu1.size() != mu2.size() || cov1.rows() != cov2.rows() ||
      cov1.rows() != mu1.size()) {
    throw std::invalid_argument("w2_gaussian: dimension mismatch");
  }
  const Mat r1 = psd_sqrt(cov1);
  const Mat cross = psd_sqrt(r1 * cov2 * r1);
  const double bures =
      cov1.trace() + cov2.trace() - 2.0 * cross.trace();
  const double sq = (mu1 - mu2).squaredNorm() + std::max(bures, 0.0);
  return std::sqrt(sq);
}

double w2_1d(const DistributionSpec& a, const DistributionSpec& b,
             double quad_tol) {
  if (!is_scalar(a) || !is_scalar(b)) {
    throw std::invalid_argument("w2_1d: both laws must be scalar");
  }
  const auto integrand = [&](double q) {
    const double d = quantile(a, q) - quantile(b, q);
    return d * d;
  };
  const double delta = 1e-8;
  QuadResult main = integrate_gk(integrand, delta, 1.0 - delta, quad_tol);
  // Tail handling: the quantile difference of Gaussian-tailed laws grows only
  // like sqrt(log(1/q)), so the tail mass is integrable; push the cutoff down
  // to 1e-16 by quadrature.  The mass below that cutoff is bounded by the
  // endpoint value times the cutoff and is negligible at double precision.
  const double tail = 1e-16;
  QuadResult lo = integrate_gk(integrand, tail, delta, quad_tol);
  QuadResult hi = integrate_gk(integrand, 1.0 - delta, 1.0 - tail, quad_tol);
  const double total = main.value + lo.value + hi.value;
  return std::sqrt(std::max(total, 0.0));
}

double smoothed_uniform_w2_constant() {
  return 2.0 * (6.0 - 6.0 * std::sqrt(2.0) + M_PI) / (3.0 * M_PI);
}

double w2_smoothed_uniform_closed(double tau) {
  if (!(tau > 0.0 && tau <= 0.5)) {
    throw std::domain_error("w2_smoothed_uniform_closed: tau out of range");
  }
  return std::sqrt(smoothed_uniform_w2_constant() * tau * tau * tau);
}

CouplingCostReport empirical_coupling_cost(const Mat& clean,
                                           const Mat& perturbed,
                                           double budget,
                                           long rows_per_trial) {
  if (clean.rows() != perturbed.rows() || clean.cols() != perturbed.cols()) {
    throw std::invalid_argument("empirical_coupling_cost: shape mismatch");
  }
  if (rows_per_trial < 1 || clean.rows() % rows_per_trial != 0) {
    throw std::invalid_argument(
        "empirical_coupling_cost: rows must split into whole trials");
  }
  const long n = clean.rows() / rows_per_trial;
  double mean = 0.0, m2 = 0.0;
  for (long t = 0; t < n; ++t) {
    double v = 0.0;
    for (long i = 0; i < rows_per_trial; ++i) {
      const long row = t * rows_per_trial + i;
      v += (perturbed.row(row) - clean.row(row)).squaredNorm();
    }
    v /= static_cast<double>(rows_per_trial);
    const double d = v - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (v - mean);
  }
  CouplingCostReport r;
  r.trials = n;
  r.mean_sq_displacement = mean;
  r.std_error = (n > 1) ? std::sqrt(m2 / (static_cast<double>(n) - 1.0) /
                                    static_cast<double>(n))
                        : 0.0;
  r.budget = budget;
  r.within_budget =
      mean <= budget + 3.0 * r.std_error + 1e-9 * std::max(1.0, budget);
  return r;
}

double kl_numeric(const DistributionSpec& p, const DistributionSpec& q,
                  double quad_tol) {
  if (!is_scalar(p) || !is_scalar(q)) {
    throw std::invalid_argument("kl_numeric: both laws must be scalar");
  }
  const double c = center(p);
  const double w = effective_halfwidth(p);
  const auto integrand = [&](double x) {
    const double px = pdf(p, x);
    if (px <= 0.0) return 0.0;
    const double qx = pdf(q, x);
    if (qx <= 1e-300) {
      throw std::runtime_error("kl_numeric: support violation (p > 0 where q = 0)");
    }
    return px * std::log(px / qx);
  };
  return integrate_gk(integrand, c - w, c + w, quad_tol).value;
}

double talagrand_w2_upper(double kl, double rho) {
  if (!(rho > 0.0) || kl < 0.0) {
    throw std::domain_error("talagrand_w2_upper: need rho > 0 and kl >= 0");
  }
  return std::sqrt(2.0 * kl / rho);
}

}  // namespace wshift
