#include "wshift/quadrature.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace wshift {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double norm_pdf(double x) { return boost::math::pdf(kStdNormal, x); }

double norm_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("norm_quantile: p must lie in (0, 1)");
  }
  return boost::math::quantile(kStdNormal, p);
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  QuadResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), tol, &r.error);
  return r;
}

namespace {

// One level of adaptive Simpson.  `fa`, `fm`, `fb` are cached endpoint and
// midpoint evaluations; `whole` the Simpson estimate on [a, b].
double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth, double* err_acc) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    *err_acc += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace

QuadResult integrate_simpson(const std::function<double(double)>& f, double a,
                             double b, double tol, int max_depth) {
  QuadResult r;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  r.value = simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, &r.error);
  return r;
}

double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo <= target && target <= fhi)) {
    throw std::domain_error("invert_monotone: target outside bracket");
  }
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // hit floating-point resolution
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace wshift
