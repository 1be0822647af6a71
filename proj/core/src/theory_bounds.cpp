#include "wshift/theory_bounds.hpp"

#include "wshift/estimators.hpp"
#include "wshift/transport.hpp"

#include <cmath>
#include <stdexcept>

namespace wshift {

namespace {

double sq(double x) { return x * x; }

double sigma_min(const Mat& design) {
  Eigen::JacobiSVD<Mat> svd(design);
  const Vec& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double tol = std::max(design.rows(), design.cols()) *
                     std::numeric_limits<double>::epsilon() * smax;
  if (!(smin > tol)) {
    throw std::invalid_argument("lr_risk: design is rank deficient");
  }
  return smin;
}

double trace_sigma_projector(const Mat& design, const Mat& noise_cov) {
  return (noise_cov * oblique_projector(design, noise_cov)).trace();
}

}  // namespace

TheoryBound location_risk(ShiftClass cls, double eps, int n, int p,
                          double trace_sigma) {
  if (eps < 0.0 || n < 1 || p < 1 || !(trace_sigma > 0.0)) {
    throw std::domain_error("location_risk: invalid parameters");
  }
  const double nn = static_cast<double>(n);
  double value = 0.0;
  switch (cls) {
    case ShiftClass::CDS:
      value = eps * eps + trace_sigma / nn;
      break;
    case ShiftClass::JDS:
      value = sq(eps + std::sqrt(trace_sigma / nn));
      break;
    case ShiftClass::IDS: {
      if (n == 1) {
        value = sq(eps + std::sqrt(trace_sigma));
        break;
      }
      const double nm1 = nn - 1.0;
      if (eps * eps <= trace_sigma / (nm1 * nm1)) {
        value = sq(eps + std::sqrt(trace_sigma)) / nn;
      } else {
        value = eps * eps + trace_sigma / nm1;
      }
      break;
    }
  }
  TheoryBound b;
  b.problem = "location";
  b.shift_class = cls;
  b.eps = eps;
  b.exact = value;
  b.lower = value;
  b.upper = value;
  return b;
}

TheoryBound lr_risk(double eps, const Mat& design, const Mat& noise_cov,
                    LrLossKind loss) {
  if (eps < 0.0) throw std::domain_error("lr_risk: eps must be >= 0");
  const double n = static_cast<double>(design.rows());
  const double trace_sp = trace_sigma_projector(design, noise_cov);

  TheoryBound b;
  b.problem = "linear_regression";
  b.shift_class = ShiftClass::JDS;
  b.eps = eps;
  if (loss == LrLossKind::Prediction) {
    const double value = sq(eps + std::sqrt(trace_sp / n));
    b.exact = value;
    b.lower = value;
    b.upper = value;
    return b;
  }
  // Squared-error loss: matching constants are unknown, report bounds only.
  Eigen::LLT<Mat> llt(noise_cov);
  const Mat gram = design.transpose() * llt.solve(design);
  const double trace_gram_inv = gram.inverse().trace();
  const double smin = sigma_min(design);
  const double bayes_lower =
      sq(1.0 + eps * std::sqrt(n / trace_sp)) * trace_gram_inv;
  const double modulus_lower = n * eps * eps / sq(smin);
  b.lower = std::max(bayes_lower, modulus_lower);

  const Mat xtx_inv = (design.transpose() * design).inverse();
  const Mat mid = design * xtx_inv * xtx_inv * design.transpose();
  const double trace_var = (noise_cov * mid).trace();
  b.upper = sq(eps * std::sqrt(n) / smin + std::sqrt(trace_var));
  return b;
}

TheoryBound uniform_bounds(ShiftClass cls, double eps, int n) {
  if (eps < 0.0 || n < 1) throw std::domain_error("uniform_bounds: invalid parameters");
  const double nn = static_cast<double>(n);
  const double shift_free = 1.0 / (2.0 * (nn + 1.0) * (nn + 2.0));
  const double cds_exact = eps * eps + shift_free;

  TheoryBound b;
  b.problem = "uniform";
  b.shift_class = cls;
  b.eps = eps;
  if (cls == ShiftClass::CDS) {
    b.exact = cds_exact;
    b.lower = cds_exact;
    b.upper = cds_exact;
    return b;
  }
  // IDS / JDS lower: smoothed-family CRLB (capped at the Gaussian-location
  // value 1/(2 pi n)), never below the CDS exact risk.
  const double crlb = (eps > 0.0)
                          ? std::min(0.614 * std::pow(eps, 2.0 / 3.0) / nn,
                                     1.0 / (2.0 * M_PI * nn))
                          : 0.0;
  b.lower = std::max(crlb, cds_exact);
  // JDS upper from the switching estimator; also an upper bound for IDS.
  const double cu = switching_threshold(n);
  if (eps <= cu) {
    b.upper = sq(eps * std::sqrt(nn) + std::sqrt(shift_free));
  } else {
    b.upper = sq(eps + 1.0 / std::sqrt(12.0 * nn));
  }
  return b;
}

TheoryBound density_bounds(double eps, double n, double s) {
  if (!(s > 0.0) || !(n >= 1.0) || eps < 0.0) {
    throw std::domain_error("density_bounds: invalid parameters");
  }
  const double stat = std::pow(n, -2.0 * s / (2.0 * s + 1.0));
  TheoryBound b;
  b.problem = "density";
  b.shift_class = ShiftClass::IDS;
  b.eps = eps;
  b.rate_only = true;
  b.upper = std::max(stat, (eps > 0.0) ? std::pow(eps, 2.0 * s / (s + 2.0)) : 0.0);
  if (eps <= 1.0) {
    b.lower =
        std::max(stat, (eps > 0.0) ? std::pow(eps, 4.0 * s / (2.0 * s + 1.0)) : 0.0);
  }  // eps > 1: the lower-bound construction does not apply; omit it
  return b;
}

double crlb_smoothed_uniform(double eps, double n) {
  if (!(eps > 0.0) || !(n >= 1.0)) {
    throw std::domain_error("crlb_smoothed_uniform: invalid parameters");
  }
  const double c = smoothed_uniform_w2_constant();
  if (eps < std::sqrt(c / 2.0)) {
    return std::pow(eps, 2.0 / 3.0) / (n * M_PI * std::cbrt(c));
  }
  return 1.0 / (2.0 * M_PI * n);
}

double lower_bound_tool(LowerBoundTool tool, const LowerBoundParams& pr,
                        const std::function<double(double)>& phi) {
  const double eps = pr.eps, sigma = pr.sigma, n = pr.n, p = pr.p;
  switch (tool) {
    case LowerBoundTool::ModulusLocation:
      return std::max(phi(eps) / 2.0, pr.m0);
    case LowerBoundTool::LeCamGauss1D:
      return phi(eps + sigma / (2.0 * std::sqrt(n))) / 4.0;
    case LowerBoundTool::FanoGauss: {
      if (p < 2.0) throw std::domain_error("fano_gauss: requires p >= 2");
      const double r = eps + sigma * std::sqrt((p - 2.0) * std::log(2.0) / (4.0 * n));
      return phi(r / 4.0) / 2.0;
    }
    case LowerBoundTool::AssouadGauss:
      return eps * eps / 4.0 + sigma * sigma * p / (32.0 * n);
    case LowerBoundTool::NonparamReg: {
      const double rate = std::pow(n / (sigma * sigma), -pr.s / (2.0 * pr.s + 1.0));
      return std::max(phi(eps), phi(rate));
    }
    case LowerBoundTool::FanoLrSquared: {
      if (p < 23.0) throw std::domain_error("fano_lr_squared: requires p >= 23");
      if (pr.design.size() == 0) {
        throw std::domain_error("fano_lr_squared: design required");
      }
      const double op_norm = pr.design.operatorNorm() / std::sqrt(n);
      const double r =
          (8.0 * eps + sigma * std::sqrt(2.0 * (p - 16.0 * std::log(2.0)) / n)) /
          (16.0 * op_norm);
      return phi(r) / 2.0;
    }
    case LowerBoundTool::FanoLrPrediction: {
      if (p < 2.0) throw std::domain_error("fano_lr_prediction: requires p >= 2");
      const double r = (2.0 * eps + sigma * std::sqrt((p - 1.0) / (4.0 * n))) / 8.0;
      return phi(r) / 3.0;
    }
  }
  throw std::domain_error("lower_bound_tool: unknown tool");
}

double bayes_posterior_location(double eps, int n, int p, const Mat& sigma_cov,
                                double b, ShiftClass cls) {
  if (eps < 0.0 || n < 1 || p < 1) {
    throw std::domain_error("bayes_posterior_location: invalid parameters");
  }
  if (std::isinf(b)) return bayes_posterior_location_limit(eps, n, p, sigma_cov, cls);
  if (!(b > 0.0)) throw std::domain_error("bayes_posterior_location: b must be > 0");
  if (cls != ShiftClass::JDS) {
    throw std::domain_error(
        "bayes_posterior_location: finite-b trace available for JDS only");
  }
  const double trace_sigma = sigma_cov.trace();
  const double xi = eps * std::sqrt(static_cast<double>(n) / trace_sigma);
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma_cov);
  double acc = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = std::max(es.eigenvalues()(i), 0.0);
    // Pseudo-inverse convention: a null eigendirection of Sigma carries no
    // likelihood information and contributes the prior variance b^2.
    const double info = (lambda > 0.0)
                            ? static_cast<double>(n) / (sq(1.0 + xi) * lambda)
                            : 0.0;
    acc += 1.0 / (1.0 / (b * b) + info);
  }
  return acc;
}

double bayes_posterior_location_limit(double eps, int n, int p,
                                      const Mat& sigma_cov, ShiftClass cls) {
  const double trace_sigma = sigma_cov.trace();
  const double nn = static_cast<double>(n);
  if (cls == ShiftClass::JDS) {
    return sq(eps + std::sqrt(trace_sigma / nn));
  }
  // IDS limit: (1 + zeta)^2 TrSigma / n + psi^2.
  const auto spec =
      least_favorable_location(ShiftClass::IDS, eps, n, p, trace_sigma);
  if (const auto* ids = std::get_if<IdsLeastFavorable>(&spec)) {
    return sq(1.0 + ids->zeta) * trace_sigma / nn + sq(ids->psi);
  }
  // n = 1 fell back to JDS.
  return sq(eps + std::sqrt(trace_sigma / nn));
}

double bayes_posterior_lr_limit(double eps, const Mat& design,
                                const Mat& noise_cov, LrLossKind loss) {
  const double n = static_cast<double>(design.rows());
  const double trace_sp = trace_sigma_projector(design, noise_cov);
  const double kappa = (eps > 0.0) ? eps * std::sqrt(n / trace_sp) : 0.0;
  if (loss == LrLossKind::Prediction) {
    return sq(1.0 + kappa) * trace_sp / n;
  }
  Eigen::LLT<Mat> llt(noise_cov);
  const Mat gram = design.transpose() * llt.solve(design);
  return sq(1.0 + kappa) * gram.inverse().trace();
}

double modulus_location_family(double eps) {
  if (eps < 0.0) throw std::domain_error("modulus_location_family: eps < 0");
  return 2.0 * eps;
}

}  // namespace wshift
