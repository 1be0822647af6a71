#include "wshift/distributions.hpp"

#include "wshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <vector>

namespace wshift {

namespace {

constexpr double kGaussKernelAtZero = 0.39894228040143268;  // 1/sqrt(2 pi)
constexpr double kDensityFloor = 1e-16;

// ---- Gaussian covariance factor (Cholesky with symmetric-PSD fallback) ----

Mat psd_factor(const Mat& cov) {
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Singular (or numerically indefinite) covariance: eigendecompose and clamp
  // slightly negative eigenvalues at zero.
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  const Vec& ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  if (ev.minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument("covariance matrix is not positive semidefinite");
  }
  Vec sqrt_ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * sqrt_ev.asDiagonal();
}

double gaussian_halfwidth(double sigma) {
  // Solve phi_sigma(x) = 1e-16 for x; returns at least 1.
  const double arg = kDensityFloor * sigma / kGaussKernelAtZero;
  if (arg >= 1.0) return 1.0;
  return std::max(1.0, sigma * std::sqrt(-2.0 * std::log(arg)));
}

// ---- bump kernel machinery ------------------------------------------------

double bump_base(double u) {  // exp(-1/(1-u^2)) on |u| < 1
  const double q = 1.0 - u * u;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

// Certified amplitude cache and T-integral tables, keyed by the Holder
// exponent s.  Both depend only on s, not on (L, h, sigma).
std::mutex g_bump_mutex;
std::map<double, double> g_amplitude_cache;

struct TIntegralTable {
  // Prefix integrals of T(u) = K_b(u) - K_b(u-1) on [-1/2, 3/2].
  std::vector<double> u;       // nodes
  std::vector<double> prefix;  // Int_{-1/2}^{u_i} T
};
std::map<double, std::shared_ptr<const TIntegralTable>> g_tint_cache;

double certify_amplitude(double s) {
  // Largest a with a*K0(2u) in Sigma(s, 1/4), certified on a dense grid:
  // compute the l-th derivative of K0(2u) by repeated central differences and
  // maximize |g(x) - g(x')| / |x - x'|^(s-l) over grid pairs.
  const int l = static_cast<int>(std::floor(s));
  const int m = 2001;
  const double lo = -0.5, hi = 0.5;
  const double dx = (hi - lo) / (m - 1);
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = bump_base(2.0 * (lo + i * dx));
  for (int d = 0; d < l; ++d) {
    std::vector<double> next(m, 0.0);
    for (int i = 1; i + 1 < m; ++i) next[i] = (g[i + 1] - g[i - 1]) / (2.0 * dx);
    g.swap(next);  // boundary values stay 0: all derivatives vanish there
  }
  const double expo = s - l;
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double num = std::abs(g[i] - g[j]);
      const double den = (expo == 0.0) ? 1.0 : std::pow((j - i) * dx, expo);
      worst = std::max(worst, num / den);
    }
  }
  if (!(worst > 0.0)) throw std::runtime_error("bump amplitude certification failed");
  return 0.25 / worst;
}

std::shared_ptr<const TIntegralTable> tint_table(double s) {
  {
    std::lock_guard<std::mutex> lock(g_bump_mutex);
    auto it = g_tint_cache.find(s);
    if (it != g_tint_cache.end()) return it->second;
  }
  auto table = std::make_shared<TIntegralTable>();
  const int cells = 8192;
  const double lo = -0.5, hi = 1.5;
  const double du = (hi - lo) / cells;
  table->u.resize(cells + 1);
  table->prefix.resize(cells + 1);
  table->u[0] = lo;
  table->prefix[0] = 0.0;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = lo + i * du;
    const double b = a + du;
    const double mid = 0.5 * (a + b);
    acc += du / 6.0 * (bump_t(s, a) + 4.0 * bump_t(s, mid) + bump_t(s, b));
    table->u[i + 1] = b;
    table->prefix[i + 1] = acc;
  }
  std::lock_guard<std::mutex> lock(g_bump_mutex);
  auto [it, inserted] = g_tint_cache.emplace(s, table);
  return it->second;
}

// ---- tabulated inverse CDF for the bump density ---------------------------

struct BumpQuantileTable {
  std::vector<double> x, cdf_v, dens;
};

using BumpKey = std::array<double, 6>;
std::mutex g_table_mutex;
std::map<BumpKey, std::shared_ptr<const BumpQuantileTable>> g_table_cache;

std::shared_ptr<const BumpQuantileTable> bump_quantile_table(
    const HolderBumpDensity& b) {
  const BumpKey key{b.x0, b.s, b.big_l, b.sigma_base, b.h,
                    static_cast<double>(b.sign)};
  {
    std::lock_guard<std::mutex> lock(g_table_mutex);
    auto it = g_table_cache.find(key);
    if (it != g_table_cache.end()) return it->second;
  }
  const DistributionSpec spec = b;
  const double c = center(spec);
  const double w = effective_halfwidth(spec);
  const int m = 4097;  // Chebyshev-spaced nodes over the effective support
  auto table = std::make_shared<BumpQuantileTable>();
  table->x.resize(m);
  table->cdf_v.resize(m);
  table->dens.resize(m);
  for (int i = 0; i < m; ++i) {
    const double t = std::cos(M_PI * (m - 1 - i) / (m - 1));  // -1 .. 1
    const double xi = c + w * t;
    table->x[i] = xi;
    table->cdf_v[i] = cdf(spec, xi);
    table->dens[i] = pdf(spec, xi);
  }
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto [it, inserted] = g_table_cache.emplace(key, table);
  return it->second;
}

double table_quantile(const BumpQuantileTable& t, double q) {
  const auto& f = t.cdf_v;
  if (q <= f.front()) return t.x.front();
  if (q >= f.back()) return t.x.back();
  const auto pos = std::upper_bound(f.begin(), f.end(), q);
  const int i = static_cast<int>(pos - f.begin()) - 1;
  const double f0 = f[i], f1 = f[i + 1];
  const double dF = f1 - f0;
  if (dF <= 0.0) return t.x[i];
  const double sec = (t.x[i + 1] - t.x[i]) / dF;
  // Monotone cubic Hermite of x as a function of F, slopes 1/density capped
  // at three times the secant (Fritsch-Carlson safeguard).
  auto slope = [&](int k) {
    const double d = t.dens[k];
    const double raw = (d > 0.0) ? 1.0 / d : 3.0 * sec;
    return std::min(raw, 3.0 * sec);
  };
  const double s0 = slope(i), s1 = slope(i + 1);
  const double u = (q - f0) / dF;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * t.x[i] + (u3 - 2 * u2 + u) * dF * s0 +
         (-2 * u3 + 3 * u2) * t.x[i + 1] + (u3 - u2) * dF * s1;
}

// ---- per-variant scalar helpers -------------------------------------------

bool gaussian_is_scalar(const GaussianLocation& g) {
  return g.theta.size() == 1;
}

double smoothed_cdf_right(const SmoothedUniform& s, double d) {
  // CDF at theta + d for d >= 0.
  const double knot = 0.5 - s.tau;
  if (d <= knot) return 0.5 + d;
  const double y = (d - knot) / (2.0 * s.tau * kGaussKernelAtZero);
  return 1.0 - 2.0 * s.tau + 2.0 * s.tau * norm_cdf(y);
}

}  // namespace

// ---------------------------------------------------------------------------

double bump_kernel(double s, double u) {
  return bump_amplitude(s) * bump_base(2.0 * u);
}

double bump_t(double s, double u) {
  return bump_kernel(s, u) - bump_kernel(s, u - 1.0);
}

double bump_amplitude(double s) {
  if (!(s > 0.0)) throw std::domain_error("bump_amplitude: s must be positive");
  {
    std::lock_guard<std::mutex> lock(g_bump_mutex);
    auto it = g_amplitude_cache.find(s);
    if (it != g_amplitude_cache.end()) return it->second;
  }
  const double a = certify_amplitude(s);
  std::lock_guard<std::mutex> lock(g_bump_mutex);
  auto [it, inserted] = g_amplitude_cache.emplace(s, a);
  return it->second;
}

double bump_t_integral(double s, double u) {
  if (u <= -0.5) return 0.0;
  const auto table = tint_table(s);
  const double uu = std::min(u, 1.5);
  const double lo = -0.5, du = 2.0 / 8192;
  int i = static_cast<int>((uu - lo) / du);
  i = std::clamp(i, 0, 8191);
  const double a = table->u[i];
  double value = table->prefix[i];
  if (uu > a) {
    const double mid = 0.5 * (a + uu);
    value += (uu - a) / 6.0 *
             (bump_t(s, a) + 4.0 * bump_t(s, mid) + bump_t(s, uu));
  }
  return value;
}

// ---------------------------------------------------------------------------

void validate(const DistributionSpec& spec) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          if (v.theta.size() < 1) throw std::invalid_argument("GaussianLocation: empty theta");
          if (v.sigma_cov.rows() != v.theta.size() ||
              v.sigma_cov.cols() != v.theta.size()) {
            throw std::invalid_argument("GaussianLocation: covariance shape mismatch");
          }
          if (!v.sigma_cov.isApprox(v.sigma_cov.transpose(), 1e-12)) {
            throw std::invalid_argument("GaussianLocation: covariance not symmetric");
          }
          psd_factor(v.sigma_cov);  // throws if not PSD
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          if (!(v.tau > 0.0 && v.tau <= 0.5)) {
            throw std::invalid_argument("SmoothedUniform: tau must lie in (0, 1/2]");
          }
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          if (!(v.s > 0.0 && v.big_l > 0.0 && v.sigma_base > 0.0 && v.h > 0.0)) {
            throw std::invalid_argument("HolderBumpDensity: parameters must be positive");
          }
          if (v.sign < -1 || v.sign > 1) {
            throw std::invalid_argument("HolderBumpDensity: sign must be -1, 0, or +1");
          }
          // Positivity scan over a wide window around the bump (memoized so
          // repeated sampling does not re-run the grid scan).
          static std::mutex scan_mutex;
          static std::set<std::array<double, 6>> scanned;
          const std::array<double, 6> key{v.x0, v.s, v.big_l, v.sigma_base,
                                          v.h, static_cast<double>(v.sign)};
          {
            std::lock_guard<std::mutex> lock(scan_mutex);
            if (scanned.count(key)) return;
          }
          const DistributionSpec s = v;
          const double lo = v.x0 - 5.0 * v.sigma_base;
          const double hi = v.x0 + 5.0 * v.sigma_base;
          for (int i = 0; i <= 2000; ++i) {
            const double x = lo + (hi - lo) * i / 2000.0;
            if (pdf(s, x) <= 0.0) {
              throw std::invalid_argument(
                  "HolderBumpDensity: density not strictly positive (L too large)");
            }
          }
          std::lock_guard<std::mutex> lock(scan_mutex);
          scanned.insert(key);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          const auto& X = v.design;
          if (X.rows() < X.cols() || X.cols() != v.theta.size()) {
            throw std::invalid_argument("LinearModel: design shape mismatch");
          }
          Eigen::JacobiSVD<Mat> svd(X);
          const double smax = svd.singularValues()(0);
          const double smin = svd.singularValues()(svd.singularValues().size() - 1);
          const double tol = std::max(X.rows(), X.cols()) *
                             std::numeric_limits<double>::epsilon() * smax;
          if (!(smin > tol)) {
            throw std::invalid_argument("LinearModel: design is rank deficient");
          }
          if (v.noise_cov.rows() != X.rows() || v.noise_cov.cols() != X.rows()) {
            throw std::invalid_argument("LinearModel: noise covariance shape mismatch");
          }
          Eigen::LLT<Mat> llt(v.noise_cov);
          if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("LinearModel: noise covariance not positive definite");
          }
        } else {
          (void)v;  // UniformLocation: nothing to check
        }
      },
      spec);
}

Vec true_parameter(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& v) -> Vec {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          return v.theta;
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return Vec::Constant(1, v.theta);
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          return Vec::Constant(1, v.theta);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          return v.theta;
        } else {
          return Vec();  // HolderBumpDensity: no location parameter
        }
      },
      spec);
}

int observation_dim(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          return static_cast<int>(v.theta.size());
        } else {
          return 1;
        }
      },
      spec);
}

bool is_scalar(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          return gaussian_is_scalar(v);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          return false;
        } else {
          return true;
        }
      },
      spec);
}

double center(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          return v.theta(0);
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return v.theta;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          return v.theta;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          return 0.0;  // base Gaussian is centered at zero
        } else {
          throw std::invalid_argument("center: not a scalar law");
        }
      },
      spec);
}

double effective_halfwidth(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          return gaussian_halfwidth(std::sqrt(v.sigma_cov(0, 0)));
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return 0.5;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          return 0.5 + 40.0 * v.tau * kGaussKernelAtZero;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          return gaussian_halfwidth(v.sigma_base) + std::abs(v.x0) + 2.0 * v.h;
        } else {
          throw std::invalid_argument("effective_halfwidth: not a scalar law");
        }
      },
      spec);
}

Mat sample(const DistributionSpec& spec, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  validate(spec);
  return std::visit(
      [&](const auto& v) -> Mat {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          const int p = static_cast<int>(v.theta.size());
          const Mat L = psd_factor(v.sigma_cov);
          Mat out(n, p);
          Vec z(p);
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) z(j) = rng.normal();
            out.row(i) = (v.theta + L * z).transpose();
          }
          return out;
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          Mat out(n, 1);
          for (int i = 0; i < n; ++i) out(i, 0) = v.theta - 0.5 + rng.uniform();
          return out;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          const DistributionSpec s = v;
          Mat out(n, 1);
          for (int i = 0; i < n; ++i) out(i, 0) = quantile(s, rng.uniform());
          return out;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          Mat out(n, 1);
          if (v.sign == 0) {
            for (int i = 0; i < n; ++i) out(i, 0) = v.sigma_base * rng.normal();
          } else {
            const auto table = bump_quantile_table(v);
            for (int i = 0; i < n; ++i) {
              out(i, 0) = table_quantile(*table, rng.uniform());
            }
          }
          return out;
        } else {  // LinearModel: one draw of Y in R^n
          if (n != v.design.rows()) {
            throw std::invalid_argument("sample: LinearModel requires n == design rows");
          }
          const Mat L = psd_factor(v.noise_cov);
          Vec z(n);
          for (int i = 0; i < n; ++i) z(i) = rng.normal();
          Mat out(n, 1);
          out.col(0) = v.design * v.theta + L * z;
          return out;
        }
      },
      spec);
}

double pdf(const DistributionSpec& spec, double x) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          if (!gaussian_is_scalar(v)) {
            throw std::invalid_argument("pdf: GaussianLocation must be 1-D");
          }
          const double sd = std::sqrt(v.sigma_cov(0, 0));
          return norm_pdf((x - v.theta(0)) / sd) / sd;
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return (std::abs(x - v.theta) <= 0.5) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          const double d = std::abs(x - v.theta);
          const double knot = 0.5 - v.tau;
          if (d <= knot) return 1.0;
          const double y = (d - knot) / (2.0 * v.tau * kGaussKernelAtZero);
          return norm_pdf(y) / kGaussKernelAtZero;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          const double base =
              norm_pdf(x / v.sigma_base) / v.sigma_base;
          if (v.sign == 0) return base;
          const double tau = v.big_l * std::pow(v.h, v.s);
          return base + v.sign * tau * bump_t(v.s, (x - v.x0) / v.h);
        } else {
          throw std::invalid_argument("pdf: LinearModel is not a scalar law");
        }
      },
      spec);
}

double cdf(const DistributionSpec& spec, double x) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          if (!gaussian_is_scalar(v)) {
            throw std::invalid_argument("cdf: GaussianLocation must be 1-D");
          }
          const double sd = std::sqrt(v.sigma_cov(0, 0));
          return norm_cdf((x - v.theta(0)) / sd);
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return std::clamp(x - v.theta + 0.5, 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          const double d = x - v.theta;
          if (d >= 0.0) return smoothed_cdf_right(v, d);
          return 1.0 - smoothed_cdf_right(v, -d);
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          const double base = norm_cdf(x / v.sigma_base);
          if (v.sign == 0) return base;
          const double tau = v.big_l * std::pow(v.h, v.s);
          return base +
                 v.sign * tau * v.h * bump_t_integral(v.s, (x - v.x0) / v.h);
        } else {
          throw std::invalid_argument("cdf: LinearModel is not a scalar law");
        }
      },
      spec);
}

double quantile(const DistributionSpec& spec, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("quantile: q must lie in (0, 1)");
  }
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          if (!gaussian_is_scalar(v)) {
            throw std::invalid_argument("quantile: GaussianLocation must be 1-D");
          }
          return v.theta(0) + std::sqrt(v.sigma_cov(0, 0)) * norm_quantile(q);
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          return v.theta - 0.5 + q;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          if (q < 0.5) {
            const DistributionSpec mirror = v;
            return 2.0 * v.theta - quantile(mirror, 1.0 - q);
          }
          const double knot_q = 1.0 - v.tau;
          if (q <= knot_q) return v.theta + q - 0.5;
          const double z = norm_quantile((q - (1.0 - 2.0 * v.tau)) / (2.0 * v.tau));
          return v.theta + 0.5 - v.tau + 2.0 * v.tau * kGaussKernelAtZero * z;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          const DistributionSpec s = v;
          const double c = center(s);
          const double w = effective_halfwidth(s);
          return invert_monotone([&](double x) { return cdf(s, x); }, q, c - w,
                                 c + w, 1e-11);
        } else {
          throw std::invalid_argument("quantile: LinearModel is not a scalar law");
        }
      },
      spec);
}

double fisher_info_smoothed_uniform(double tau) {
  if (!(tau > 0.0 && tau <= 0.5)) {
    throw std::domain_error("fisher_info_smoothed_uniform: tau out of range");
  }
  return M_PI / tau;
}

double fisher_info_smoothed_uniform_numeric(double tau) {
  if (!(tau > 0.0 && tau <= 0.5)) {
    throw std::domain_error("fisher_info_smoothed_uniform_numeric: tau out of range");
  }
  // (1/(tau K(0)^2)) Int_0^inf K'(y)^2 / K(y) dy; with the Gaussian kernel the
  // integrand reduces to y^2 K(y).
  const auto integrand = [](double y) { return y * y * norm_pdf(y); };
  const QuadResult r = integrate_gk(integrand, 0.0, 40.0, 1e-13);
  return r.value / (tau * kGaussKernelAtZero * kGaussKernelAtZero);
}

}  // namespace wshift
