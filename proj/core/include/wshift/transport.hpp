#pragma once

#include "wshift/distributions.hpp"

namespace wshift {

// Empirical coupling-cost summary for validating a perturbation against the
// per-observation budget eps^2.
struct CouplingCostReport {
  double mean_sq_displacement = 0.0;  // estimate of E ||X' - X||^2
  double std_error = 0.0;
  long trials = 0;
  double budget = 0.0;  // eps^2
  bool within_budget = false;
};

// W2 between Gaussians:
//   sqrt( ||mu1-mu2||^2 + Tr[C1 + C2 - 2 (C1^{1/2} C2 C1^{1/2})^{1/2}] ).
double w2_gaussian(const Vec& mu1, const Mat& cov1, const Vec& mu2,
                   const Mat& cov2);

// W2 between scalar laws via the quantile-function representation
//   W2^2 = Int_0^1 (F1^{-1}(q) - F2^{-1}(q))^2 dq,
// adaptive quadrature on (1e-8, 1-1e-8) plus tail handling.
double w2_1d(const DistributionSpec& a, const DistributionSpec& b,
             double quad_tol);

// Closed form W2 between Unif[theta +- 1/2] and its tau-smoothed version:
// sqrt(c tau^3) with c = 2(6 - 6 sqrt(2) + pi) / (3 pi).
double w2_smoothed_uniform_closed(double tau);
double smoothed_uniform_w2_constant();  // the constant c above

// Mean squared rowwise displacement between paired samples, compared against
// the budget with three-standard-error slack (plus a relative epsilon so an
// exactly-saturated deterministic budget is not rejected by rounding).  Rows
// belonging to one Monte Carlo trial are correlated; `rows_per_trial` groups
// consecutive rows so the standard error is computed across trials.
CouplingCostReport empirical_coupling_cost(const Mat& clean,
                                           const Mat& perturbed, double budget,
                                           long rows_per_trial = 1);

// KL(p || q) by quadrature over the effective support of p.
double kl_numeric(const DistributionSpec& p, const DistributionSpec& q,
                  double quad_tol);

// Talagrand transportation inequality: W2 <= sqrt(2 KL / rho) for
// rho-strongly-log-concave reference laws.
double talagrand_w2_upper(double kl, double rho);

}  // namespace wshift
