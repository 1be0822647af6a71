#pragma once

#include <functional>

namespace wshift {

// Standard normal density, CDF, and quantile (inverse CDF).
double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive Gauss-Kronrod (15-point) integration with interval bisection,
// refined until the local error estimate falls below `tol`.
QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 18);

// Adaptive Simpson integration.  Symmetric integrands on symmetric intervals
// produce exactly symmetric refinement trees, which matters for integrands
// with jump discontinuities (e.g. uniform-location likelihoods).
QuadResult integrate_simpson(const std::function<double(double)>& f, double a,
                             double b, double tol, int max_depth = 48);

// Invert a nondecreasing function by bisection: returns x in [lo, hi] with
// f(x) = target, to absolute tolerance `xtol` in x.
double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double xtol = 1e-10);

}  // namespace wshift
