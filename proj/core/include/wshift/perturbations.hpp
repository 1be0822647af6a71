#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wshift/distributions.hpp"

namespace wshift {

enum class ShiftClass { CDS, IDS, JDS };
const char* to_string(ShiftClass c);

// ---------------------------------------------------------------------------
// Shift specifications.  `apply` realizes them on a clean sample; any random
// element (the direction delta) is drawn exactly once per call.
// ---------------------------------------------------------------------------

struct NoShift {};

// X'_i = X_i + delta (constant shift; ||delta|| is the budget eps).
struct ConstantShift {
  Vec delta;
};

// Constant shift of magnitude eps in a direction drawn uniformly from
// {+-e_1, ..., +-e_p} once per trial.
struct RandomDirectionConstantShift {
  double eps = 0.0;
};

// X'_i = X_i + zeta (X_i - theta) + psi delta, delta uniform on {+-e_j}.
struct IdsLeastFavorable {
  double zeta = 0.0;
  double psi = 0.0;
};

// X'_i = X_i + xi (Xbar - theta).
struct JdsMeanShift {
  double xi = 0.0;
};

// Y' = Y + kappa (P Y - X theta) for a projector P (either the orthogonal
// projector P_X or the oblique projector P_{X,Sigma}).
struct LrPredictionShift {
  double kappa = 0.0;
  Mat projector;  // n x n
  Mat design;     // n x p (needed to form X theta)
};

// Y' = Y + magnitude * direction, direction a unit vector in R^n.
struct LrConstantShift {
  Vec direction;
  double magnitude = 0.0;
};

// X'_i = X_i - eps sqrt(n/k) 1{X_i <= X_(k)}; ties resolved by stable index
// order so the realization is deterministic.
struct OrderStatTailShift {
  int k = 1;
  double eps = 0.0;
};

using PerturbationSpec =
    std::variant<NoShift, ConstantShift, RandomDirectionConstantShift,
                 IdsLeastFavorable, JdsMeanShift, LrPredictionShift,
                 LrConstantShift, OrderStatTailShift>;

// Least favorable location perturbation for the given shift class.
//   JDS: xi = eps sqrt(n / tr Sigma)
//   IDS: zeta = min(sqrt(eps^2 / tr Sigma), 1/(n-1)),
//        psi  = sqrt(max(0, eps^2 - tr Sigma/(n-1)^2));  n = 1 falls back to JDS
//   CDS: random-direction constant shift of magnitude eps.
PerturbationSpec least_favorable_location(ShiftClass cls, double eps, int n,
                                          int p, double trace_sigma);

// Least favorable regression perturbation (prediction error):
// kappa = eps sqrt(n / Tr[Sigma P_{X,Sigma}]).
PerturbationSpec least_favorable_lr(double eps, const Mat& design,
                                    const Mat& noise_cov);

// Apply the shift to a clean sample.  The adversary may use the true
// parameter theta.  The clean input is never mutated.
Mat apply(const PerturbationSpec& spec, const Mat& clean, const Vec& theta,
          RngStream& rng);

// Named catalog entries reproducing the simulation tables.
struct CatalogEntry {
  std::string label;
  ShiftClass shift_class;
  PerturbationSpec spec;
};

std::vector<CatalogEntry> location_perturbation_catalog(double eps, int n,
                                                        int p,
                                                        double trace_sigma);
std::vector<CatalogEntry> lr_perturbation_catalog(double eps, const Mat& design,
                                                  const Mat& noise_cov);
std::vector<CatalogEntry> uniform_perturbation_catalog(double eps, int n);

// Oblique projector P_{X,Sigma} = X (X^T Sigma^{-1} X)^{-1} X^T Sigma^{-1},
// computed by Cholesky solves (no explicit inverse of Sigma).
Mat oblique_projector(const Mat& design, const Mat& noise_cov);

}  // namespace wshift
