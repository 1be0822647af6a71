#include "wshift/density.hpp"

#include "wshift/estimators.hpp"
#include "wshift/quadrature.hpp"
#include "wshift/transport.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wshift {

namespace {

// Largest admissible bump bandwidth: keeps the bump support
// [x0 - h/2, x0 + 3h/2] inside the KL envelope [x0 - 2, x0 + 6].
constexpr double kBandwidthCap = 4.0;

double bump_t_sq_integral(double s) {
  // T = K_b(u) - K_b(u - 1) has disjoint supports, so int T^2 = 2 int K_b^2.
  const auto kb2 = [s](double u) {
    const double k = bump_kernel(s, u);
    return k * k;
  };
  return 2.0 * integrate_gk(kb2, -0.5, 0.5, 1e-12).value;
}

}  // namespace

DensityShiftPair build_pair(double eps, double s, double big_l,
                            double sigma_base, double x0, int sign) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw std::domain_error("build_pair: eps must lie in (0, 1]");
  }
  if (!(s > 0.0) || !(big_l > 0.0) || !(sigma_base > 0.0)) {
    throw std::domain_error("build_pair: s, L, sigma must be positive");
  }
  if (sign != 1 && sign != -1) {
    throw std::domain_error("build_pair: sign must be +-1");
  }

  // KL constant: the chi-square bound KL <= C~ L^2 h^{2s+1} holds with
  // C~ = int T^2 / inf_{envelope} phi_sigma, the envelope covering the bump
  // support for every h <= kBandwidthCap.
  const double int_t2 = bump_t_sq_integral(s);
  const double inf_phi =
      std::min(norm_pdf((x0 - 2.0) / sigma_base),
               norm_pdf((x0 + 6.0) / sigma_base)) /
      sigma_base;
  const double c_tilde = int_t2 / inf_phi;

  const double h = std::pow(
      eps / (2.0 * std::sqrt(c_tilde) * sigma_base * big_l),
      2.0 / (2.0 * s + 1.0));
  if (h > kBandwidthCap) {
    throw std::domain_error(
        "build_pair: bandwidth exceeds the certified envelope; reduce eps or "
        "increase sigma");
  }

  DensityShiftPair pair;
  pair.x0 = x0;
  pair.c_tilde = c_tilde;
  pair.amplitude = bump_amplitude(s);
  pair.clean = HolderBumpDensity{x0, s, big_l, sigma_base, h, 0};
  pair.shifted = HolderBumpDensity{x0, s, big_l, sigma_base, h, sign};
  validate(DistributionSpec{pair.clean});
  validate(DistributionSpec{pair.shifted});

  // |f2(x0) - f1(x0)| = L h^s T(0) and T(0) = K_b(0) = a / e.
  pair.pointwise_gap = big_l * std::pow(h, s) * bump_t(s, 0.0);

  // Quadrature can return a slightly negative KL when the bump is tiny;
  // clamp at zero before applying the transportation inequality.
  const double kl = std::max(
      0.0, kl_numeric(DistributionSpec{pair.shifted},
                      DistributionSpec{pair.clean}, 1e-11));
  pair.eps_certified =
      talagrand_w2_upper(kl, 1.0 / (sigma_base * sigma_base));
  if (pair.eps_certified > eps) {
    std::ostringstream msg;
    msg << "build_pair: certification failed, realized W2 bound "
        << pair.eps_certified << " exceeds budget " << eps;
    throw std::runtime_error(msg.str());
  }
  return pair;
}

std::vector<KdeRiskPoint> kde_risk_curve(const DensityShiftPair& pair,
                                         const std::vector<long>& n_grid,
                                         long trials, std::uint64_t seed,
                                         double eps_for_bandwidth) {
  if (n_grid.empty()) throw std::invalid_argument("kde_risk_curve: empty grid");
  if (trials < 2) throw std::invalid_argument("kde_risk_curve: trials < 2");
  for (long n : n_grid) {
    if (n < 16) throw std::invalid_argument("kde_risk_curve: n must be >= 16");
  }
  const DistributionSpec shifted{pair.shifted};
  const double truth = pdf(DistributionSpec{pair.clean}, pair.x0);

  std::vector<KdeRiskPoint> out;
  out.reserve(n_grid.size());
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const long n = n_grid[ni];
    KdeRiskPoint point;
    point.n = n;
    point.bandwidth = bandwidth_select(static_cast<double>(n), pair.clean.s,
                                       eps_for_bandwidth);
    const EstimatorSpec kde =
        KernelDensityAt{pair.x0, point.bandwidth, Kernel::Gaussian};
    double mean = 0.0, m2 = 0.0;
    for (long t = 0; t < trials; ++t) {
      RngStream rng(derive_seed({seed, static_cast<std::uint64_t>(ni),
                                 static_cast<std::uint64_t>(t)}));
      const Mat sample_mat = sample(shifted, static_cast<int>(n), rng);
      const double fhat = estimate(kde, sample_mat)(0);
      const double loss = (fhat - truth) * (fhat - truth);
      const double d = loss - mean;
      mean += d / static_cast<double>(t + 1);
      m2 += d * (loss - mean);
    }
    point.mean_risk = mean;
    point.std_error = std::sqrt(m2 / static_cast<double>(trials - 1) /
                                static_cast<double>(trials));
    out.push_back(point);
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::domain_error("loglog_slope: inputs must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace wshift
