#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wshift/perturbations.hpp"

namespace wshift {

// Evaluated closed-form risk or upper/lower bound pair.
struct TheoryBound {
  std::string problem;
  ShiftClass shift_class = ShiftClass::CDS;
  double eps = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> exact;
  bool rate_only = false;  // constants hidden: render as slope guides only
};

enum class LrLossKind { Squared, Prediction };

// Exact minimax location risks:
//   M_C = eps^2 + tr/n
//   M_I = (eps + sqrt(tr))^2 / n          for eps <= sqrt(tr)/(n-1)
//         eps^2 + tr/(n-1)                otherwise    (n = 1: same as JDS)
//   M_J = (eps + sqrt(tr/n))^2
TheoryBound location_risk(ShiftClass cls, double eps, int n, int p,
                          double trace_sigma);

// Linear regression risks for budget W2(Y, Y') <= sqrt(n) eps.
// Prediction loss: exact = (eps + sqrt(Tr[Sigma P_{X,Sigma}] / n))^2.
// Squared loss:
//   lower = max{ (1 + eps sqrt(n / Tr[Sigma P_{X,Sigma}]))^2
//                  * Tr[(X^T Sigma^{-1} X)^{-1}],
//                n eps^2 / sigma_min(X)^2 }
//   upper = ( eps sqrt(n)/sigma_min(X) + sqrt(Tr[Sigma X (X^T X)^{-2} X^T]) )^2
TheoryBound lr_risk(double eps, const Mat& design, const Mat& noise_cov,
                    LrLossKind loss);

// Uniform-location bounds: CDS exact eps^2 + 1/(2(n+1)(n+2)); IDS/JDS lower
// via the smoothed-family Cramer-Rao bound capped at 1/(2 pi n); JDS upper
// piecewise in eps around the switching threshold C_U(n).
TheoryBound uniform_bounds(ShiftClass cls, double eps, int n);

// Pointwise density-estimation rates (unit constants, rate_only):
//   lower = max(n^{-2s/(2s+1)}, eps^{4s/(2s+1)})   (requires eps <= 1)
//   upper = max(n^{-2s/(2s+1)}, eps^{2s/(s+2)})
TheoryBound density_bounds(double eps, double n, double s);

// Smoothed-uniform Cramer-Rao lower bound:
//   eps^{2/3} / (n pi c^{1/3})  for eps < sqrt(c/2),  else 1/(2 pi n),
// with c the smoothed-uniform W2 constant.
double crlb_smoothed_uniform(double eps, double n);

// Named lower-bound-tool instantiations, parameterized by a monotone loss
// transform Phi.
enum class LowerBoundTool {
  ModulusLocation,   // max(Phi(eps)/2, M(0))
  LeCamGauss1D,      // Phi(eps + sigma/(2 sqrt(n))) / 4
  FanoGauss,         // Phi((eps + sigma sqrt((p-2) ln2 / (4n))) / 4) / 2,  p >= 2
  AssouadGauss,      // eps^2/4 + sigma^2 p / (32 n)   (squared loss)
  NonparamReg,       // max(Phi(eps), Phi((n/sigma^2)^{-s/(2s+1)})), rate only
  FanoLrSquared,     // p >= 23
  FanoLrPrediction,  // p >= 2
};

struct LowerBoundParams {
  double eps = 0.0;
  double sigma = 1.0;
  double n = 1.0;
  double p = 1.0;
  double s = 1.0;
  double m0 = 0.0;  // shift-free risk M(0) for the modulus bound
  Mat design;       // for the regression Fano bounds
};

double lower_bound_tool(LowerBoundTool tool, const LowerBoundParams& params,
                        const std::function<double(double)>& phi);

// Gaussian-prior posterior trace for the location problem.  Finite b gives
//   JDS: Tr[(I/b^2 + n Sigma^{-1} / (1+xi)^2)^{-1}],  xi = eps sqrt(n/TrSigma).
// b = infinity (use bayes_limit) gives the limits
//   JDS: (eps + sqrt(TrSigma/n))^2,   IDS: (1+zeta)^2 TrSigma/n + psi^2.
// Singular Sigma with finite b uses the pseudo-inverse convention: null
// directions of Sigma contribute the prior variance b^2.
double bayes_posterior_location(double eps, int n, int p, const Mat& sigma_cov,
                                double b, ShiftClass cls);
double bayes_posterior_location_limit(double eps, int n, int p,
                                      const Mat& sigma_cov, ShiftClass cls);

// b -> infinity Bayes limits for linear regression.
double bayes_posterior_lr_limit(double eps, const Mat& design,
                                const Mat& noise_cov, LrLossKind loss);

// Midpoint modulus of continuity of a W2 location family: mi(eps) = 2 eps.
double modulus_location_family(double eps);

}  // namespace wshift
