#include "wshift/estimators.hpp"

#include "wshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wshift {

namespace {

double column_median(Vec col) {
  std::sort(col.begin(), col.end());
  const long n = col.size();
  return (n % 2 == 1) ? col(n / 2) : 0.5 * (col(n / 2 - 1) + col(n / 2));
}

Vec solve_least_squares(const Mat& design, const Vec& y) {
  return design.colPivHouseholderQr().solve(y);
}

Vec solve_gls(const Mat& design, const Mat& noise_cov, const Vec& y) {
  Eigen::LLT<Mat> llt(noise_cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("estimate: GLS noise covariance not PD");
  }
  const Mat sigma_inv_x = llt.solve(design);
  const Mat gram = design.transpose() * sigma_inv_x;
  return gram.llt().solve(sigma_inv_x.transpose() * y);
}

double kernel_value(Kernel k, double u) {
  switch (k) {
    case Kernel::Gaussian:
      return norm_pdf(u);
    case Kernel::Epanechnikov:
      return (std::abs(u) <= 1.0) ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

// Numerical Pitman estimator.  The posterior weight of the location family is
// w(u) = prod_i f(x_i - u); the estimate is the posterior mean of u under a
// flat prior.  Integration is done in log space over a symmetric bracket
// around the sample midrange so that symmetric likelihoods (e.g. the uniform
// base) integrate with exactly cancelling asymmetric error.
double pitman_estimate(const Pitman1D& spec, const Vec& x) {
  const DistributionSpec& base = *spec.base_density;
  const long n = x.size();
  const double xmin = x.minCoeff();
  const double xmax = x.maxCoeff();
  const double mid = 0.5 * (xmin + xmax);
  const double mean = x.mean();
  const double sd = (n > 1) ? std::sqrt((x.array() - mean).square().sum() /
                                        static_cast<double>(n - 1))
                            : 0.0;
  const double bracket = effective_halfwidth(base) + 10.0 * sd;

  const auto loglik = [&](double u) {
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
      const double f = pdf(base, x(i) - u);
      if (f <= 0.0) return -std::numeric_limits<double>::infinity();
      acc += std::log(f);
    }
    return acc;
  };

  // Locate the region of non-negligible posterior mass on a dense symmetric
  // grid, then integrate over a symmetric hull of that region.
  const int grid_n = 8192;  // even: grid symmetric about mid
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> ll(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) {
    const double u = mid + bracket * (2.0 * i / grid_n - 1.0);
    ll[i] = loglik(u);
    lmax = std::max(lmax, ll[i]);
  }
  if (!std::isfinite(lmax)) {
    throw std::runtime_error(
        "Pitman1D: likelihood vanishes everywhere in the bracket");
  }
  double reach = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    if (ll[i] > lmax - 60.0) {
      reach = std::max(reach, std::abs(mid + bracket * (2.0 * i / grid_n - 1.0) - mid));
    }
  }
  const double r = std::min(bracket, reach + 2.0 * bracket / grid_n);

  const auto weight = [&](double v) {
    const double l = loglik(mid + v);
    return std::isfinite(l) ? std::exp(l - lmax) : 0.0;
  };
  // Piecewise panels guarantee a narrow posterior peak cannot be missed by
  // the adaptive rule; panels are laid out symmetrically about v = 0.
  const int panels = 64;
  double den = 0.0, num = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double a = -r + 2.0 * r * j / panels;
    const double b = -r + 2.0 * r * (j + 1) / panels;
    den += integrate_simpson(weight, a, b, spec.quad_tol * r / panels).value;
    num += integrate_simpson([&](double v) { return v * weight(v); }, a, b,
                             spec.quad_tol * r / panels)
               .value;
  }
  if (!(den > 0.0) || !std::isfinite(den)) {
    throw std::runtime_error("Pitman1D: posterior normalization underflow");
  }
  return mid + num / den;
}

}  // namespace

double switching_threshold(int n) {
  if (n < 1) throw std::domain_error("switching_threshold: n < 1");
  if (n == 1) return 0.0;
  const double nn = static_cast<double>(n);
  const double num = std::sqrt(3.0 / nn) -
                     std::sqrt(18.0 / ((nn + 2.0) * (nn + 1.0)));
  return num / (6.0 * (std::sqrt(nn) - 1.0));
}

double bandwidth_select(double n, double s, double eps) {
  if (!(n >= 1.0) || !(s > 0.0) || eps < 0.0) {
    throw std::domain_error("bandwidth_select: invalid parameters");
  }
  const double shift_free = std::pow(n, -1.0 / (2.0 * s + 1.0));
  const double shifted = (eps > 0.0) ? std::pow(eps, 1.0 / (s + 2.0)) : 0.0;
  return std::max(shift_free, shifted);
}

Vec estimate(const EstimatorSpec& spec, const Mat& sample) {
  if (sample.rows() < 1) throw std::invalid_argument("estimate: empty sample");
  const long n = sample.rows();
  return std::visit(
      [&](const auto& v) -> Vec {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SampleMean>) {
          return sample.colwise().mean().transpose();
        } else if constexpr (std::is_same_v<T, CoordinatewiseMedian>) {
          Vec out(sample.cols());
          for (long j = 0; j < sample.cols(); ++j) {
            out(j) = column_median(sample.col(j));
          }
          return out;
        } else if constexpr (std::is_same_v<T, Midrange>) {
          if (sample.cols() != 1) {
            throw std::invalid_argument("estimate: Midrange needs scalar data");
          }
          if (v.k < 1 || 2 * v.k > n + 1) {
            throw std::invalid_argument("estimate: Midrange k out of range");
          }
          Vec col = sample.col(0);
          std::sort(col.begin(), col.end());
          return Vec::Constant(1, 0.5 * (col(v.k - 1) + col(n - v.k)));
        } else if constexpr (std::is_same_v<T, SwitchingUniform>) {
          const EstimatorSpec branch =
              (v.eps <= switching_threshold(static_cast<int>(n)))
                  ? EstimatorSpec(Midrange{1})
                  : EstimatorSpec(SampleMean{});
          return estimate(branch, sample);
        } else if constexpr (std::is_same_v<T, LeastSquares>) {
          if (sample.cols() != 1 || sample.rows() != v.design.rows()) {
            throw std::invalid_argument("estimate: LeastSquares shape mismatch");
          }
          return solve_least_squares(v.design, sample.col(0));
        } else if constexpr (std::is_same_v<T, GeneralizedLeastSquares>) {
          if (sample.cols() != 1 || sample.rows() != v.design.rows()) {
            throw std::invalid_argument("estimate: GLS shape mismatch");
          }
          return solve_gls(v.design, v.noise_cov, sample.col(0));
        } else if constexpr (std::is_same_v<T, KernelDensityAt>) {
          if (sample.cols() != 1) {
            throw std::invalid_argument("estimate: KDE needs scalar data");
          }
          if (!(v.bandwidth > 0.0)) {
            throw std::invalid_argument("estimate: KDE bandwidth must be positive");
          }
          double acc = 0.0;
          for (long i = 0; i < n; ++i) {
            acc += kernel_value(v.kernel, (sample(i, 0) - v.x0) / v.bandwidth);
          }
          return Vec::Constant(1, acc / (static_cast<double>(n) * v.bandwidth));
        } else {  // Pitman1D
          if (sample.cols() != 1) {
            throw std::invalid_argument("estimate: Pitman1D needs scalar data");
          }
          if (!v.base_density) {
            throw std::invalid_argument("estimate: Pitman1D missing base density");
          }
          return Vec::Constant(1, pitman_estimate(v, sample.col(0)));
        }
      },
      spec);
}

std::vector<EstimatorEntry> location_estimator_catalog() {
  return {{"mean", SampleMean{}}, {"median", CoordinatewiseMedian{}}};
}

std::vector<EstimatorEntry> lr_estimator_catalog(const Mat& design,
                                                 const Mat& noise_cov) {
  return {{"least_squares", LeastSquares{design}},
          {"generalized_least_squares",
           GeneralizedLeastSquares{design, noise_cov}}};
}

std::vector<EstimatorEntry> uniform_estimator_catalog(int n) {
  std::vector<EstimatorEntry> out;
  for (int k = 1; k <= n / 2; ++k) {
    out.push_back({"midrange_k" + std::to_string(k), Midrange{k}});
  }
  out.push_back({"mean", SampleMean{}});
  out.push_back({"median", CoordinatewiseMedian{}});
  return out;
}

}  // namespace wshift
