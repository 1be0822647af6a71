#include "wshift/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wshift {

const char* to_string(ShiftClass c) {
  switch (c) {
    case ShiftClass::CDS: return "CDS";
    case ShiftClass::IDS: return "IDS";
    case ShiftClass::JDS: return "JDS";
  }
  return "?";
}

Mat oblique_projector(const Mat& design, const Mat& noise_cov) {
  Eigen::LLT<Mat> llt(noise_cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("oblique_projector: noise covariance not PD");
  }
  const Mat sigma_inv_x = llt.solve(design);        // Sigma^{-1} X
  const Mat gram = design.transpose() * sigma_inv_x;  // X^T Sigma^{-1} X
  Eigen::LLT<Mat> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) {
    throw std::invalid_argument("oblique_projector: design is rank deficient");
  }
  return design * gram_llt.solve(sigma_inv_x.transpose());
}

PerturbationSpec least_favorable_location(ShiftClass cls, double eps, int n,
                                          int p, double trace_sigma) {
  if (eps < 0.0 || n < 1 || p < 1 || !(trace_sigma > 0.0)) {
    throw std::domain_error("least_favorable_location: invalid parameters");
  }
  switch (cls) {
    case ShiftClass::CDS:
      return RandomDirectionConstantShift{eps};
    case ShiftClass::JDS:
      return JdsMeanShift{eps * std::sqrt(static_cast<double>(n) / trace_sigma)};
    case ShiftClass::IDS: {
      if (n == 1) {
        // With a single observation JDS and IDS coincide.
        return JdsMeanShift{eps * std::sqrt(1.0 / trace_sigma)};
      }
      const double nm1 = static_cast<double>(n - 1);
      const double zeta =
          std::min(std::sqrt(eps * eps / trace_sigma), 1.0 / nm1);
      const double psi =
          std::sqrt(std::max(0.0, eps * eps - trace_sigma / (nm1 * nm1)));
      return IdsLeastFavorable{zeta, psi};
    }
  }
  throw std::domain_error("least_favorable_location: unknown class");
}

PerturbationSpec least_favorable_lr(double eps, const Mat& design,
                                    const Mat& noise_cov) {
  if (eps < 0.0) throw std::domain_error("least_favorable_lr: eps must be >= 0");
  const Mat proj = oblique_projector(design, noise_cov);
  const double trace_sp = (noise_cov * proj).trace();  // Tr[Sigma P_{X,Sigma}]
  const double n = static_cast<double>(design.rows());
  const double kappa = (eps == 0.0) ? 0.0 : eps * std::sqrt(n / trace_sp);
  return LrPredictionShift{kappa, proj, design};
}

Mat apply(const PerturbationSpec& spec, const Mat& clean, const Vec& theta,
          RngStream& rng) {
  const long n = clean.rows();
  const long p = clean.cols();
  return std::visit(
      [&](const auto& v) -> Mat {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoShift>) {
          return clean;
        } else if constexpr (std::is_same_v<T, ConstantShift>) {
          if (v.delta.size() != p) {
            throw std::invalid_argument("apply: ConstantShift dimension mismatch");
          }
          return clean.rowwise() + v.delta.transpose();
        } else if constexpr (std::is_same_v<T, RandomDirectionConstantShift>) {
          const int idx = rng.uniform_int(static_cast<int>(2 * p));
          Vec delta = Vec::Zero(p);
          delta(idx % p) = (idx < p ? 1.0 : -1.0) * v.eps;
          return clean.rowwise() + delta.transpose();
        } else if constexpr (std::is_same_v<T, IdsLeastFavorable>) {
          if (theta.size() != p) {
            throw std::invalid_argument("apply: IdsLeastFavorable needs theta");
          }
          const int idx = rng.uniform_int(static_cast<int>(2 * p));
          Vec delta = Vec::Zero(p);
          delta(idx % p) = (idx < p ? 1.0 : -1.0);
          Mat out = clean;
          out += v.zeta * (clean.rowwise() - theta.transpose());
          out.rowwise() += (v.psi * delta).transpose();
          return out;
        } else if constexpr (std::is_same_v<T, JdsMeanShift>) {
          if (theta.size() != p) {
            throw std::invalid_argument("apply: JdsMeanShift needs theta");
          }
          const Vec xbar = clean.colwise().mean();
          Mat out = clean;
          out.rowwise() += (v.xi * (xbar - theta)).transpose();
          return out;
        } else if constexpr (std::is_same_v<T, LrPredictionShift>) {
          if (p != 1 || v.projector.rows() != n) {
            throw std::invalid_argument("apply: LrPredictionShift shape mismatch");
          }
          const Vec y = clean.col(0);
          const Vec shifted =
              y + v.kappa * (v.projector * y - v.design * theta);
          Mat out(n, 1);
          out.col(0) = shifted;
          return out;
        } else if constexpr (std::is_same_v<T, LrConstantShift>) {
          if (p != 1 || v.direction.size() != n) {
            throw std::invalid_argument("apply: LrConstantShift shape mismatch");
          }
          Mat out = clean;
          out.col(0) += v.magnitude * v.direction;
          return out;
        } else {  // OrderStatTailShift
          if (p != 1) {
            throw std::invalid_argument("apply: OrderStatTailShift needs scalar data");
          }
          if (v.k < 1 || v.k > n / 2) {
            throw std::invalid_argument("apply: OrderStatTailShift k out of range");
          }
          // Indices of the k smallest values, ties broken by index order.
          std::vector<long> idx(n);
          std::iota(idx.begin(), idx.end(), 0L);
          std::nth_element(idx.begin(), idx.begin() + (v.k - 1), idx.end(),
                           [&](long a, long b) {
                             return clean(a, 0) != clean(b, 0)
                                        ? clean(a, 0) < clean(b, 0)
                                        : a < b;
                           });
          const double shift =
              v.eps * std::sqrt(static_cast<double>(n) / v.k);
          Mat out = clean;
          for (int i = 0; i < v.k; ++i) out(idx[i], 0) -= shift;
          return out;
        }
      },
      spec);
}

std::vector<CatalogEntry> location_perturbation_catalog(double eps, int n,
                                                        int p,
                                                        double trace_sigma) {
  if (p < 1) throw std::domain_error("location_perturbation_catalog: p < 1");
  Vec e1 = Vec::Zero(p);
  e1(0) = eps;
  Vec diag = Vec::Constant(p, eps / std::sqrt(static_cast<double>(p)));
  std::vector<CatalogEntry> out;
  out.push_back({"const_e1", ShiftClass::CDS, ConstantShift{e1}});
  out.push_back({"const_ones", ShiftClass::CDS, ConstantShift{diag}});
  out.push_back({"ids_least_favorable", ShiftClass::IDS,
                 least_favorable_location(ShiftClass::IDS, eps, n, p,
                                          trace_sigma)});
  out.push_back({"jds_mean_shift", ShiftClass::JDS,
                 least_favorable_location(ShiftClass::JDS, eps, n, p,
                                          trace_sigma)});
  return out;
}

std::vector<CatalogEntry> lr_perturbation_catalog(double eps, const Mat& design,
                                                  const Mat& noise_cov) {
  const long n = design.rows();
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<CatalogEntry> out;

  Vec e1 = Vec::Zero(n);
  e1(0) = 1.0;
  out.push_back({"const_e1", ShiftClass::JDS, LrConstantShift{e1, root_n * eps}});

  Vec ones = Vec::Constant(n, 1.0 / root_n);
  out.push_back({"const_ones", ShiftClass::JDS,
                 LrConstantShift{ones, root_n * eps}});

  // Orthogonal-projector version: budgeted against Tr[Sigma P_X].
  const Mat eye = Mat::Identity(n, n);
  const Mat p_x = oblique_projector(design, eye);
  const double trace_px = (noise_cov * p_x).trace();
  const double kappa_px =
      (eps == 0.0) ? 0.0 : eps * std::sqrt(static_cast<double>(n) / trace_px);
  out.push_back({"proj_x", ShiftClass::JDS,
                 LrPredictionShift{kappa_px, p_x, design}});

  out.push_back({"proj_x_sigma", ShiftClass::JDS,
                 least_favorable_lr(eps, design, noise_cov)});

  // Direction v_p: right singular vector for the smallest singular value,
  // mapped into R^n through the design and normalized.
  Eigen::JacobiSVD<Mat> svd(design, Eigen::ComputeThinV);
  const Vec v_p = svd.matrixV().col(svd.matrixV().cols() - 1);
  Vec dir = design * v_p;
  dir.normalize();
  out.push_back({"const_vmin", ShiftClass::JDS,
                 LrConstantShift{dir, root_n * eps}});
  return out;
}

std::vector<CatalogEntry> uniform_perturbation_catalog(double eps, int n) {
  if (n < 2) throw std::domain_error("uniform_perturbation_catalog: n < 2");
  std::vector<CatalogEntry> out;
  for (int k = 1; k <= n / 2; ++k) {
    out.push_back({"tail_k" + std::to_string(k), ShiftClass::JDS,
                   OrderStatTailShift{k, eps}});
  }
  out.push_back({"const_shift", ShiftClass::CDS,
                 ConstantShift{Vec::Constant(1, eps)}});
  return out;
}

}  // namespace wshift
