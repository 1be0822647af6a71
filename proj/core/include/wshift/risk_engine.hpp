#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wshift/estimators.hpp"
#include "wshift/perturbations.hpp"
#include "wshift/theory_bounds.hpp"

namespace wshift {

// ---------------------------------------------------------------------------
// Losses.
// ---------------------------------------------------------------------------

struct SquaredError {};  // ||theta_hat - theta||^2

struct PredictionError {  // ||X (theta_hat - theta)||^2 / n
  Mat design;
};

struct PointwiseSquared {  // (f_hat(x0) - f(x0))^2
  double x0 = 0.0;
  double true_value = 0.0;
};

using LossSpec = std::variant<SquaredError, PredictionError, PointwiseSquared>;

double evaluate_loss(const LossSpec& loss, const Vec& estimate_value,
                     const Vec& theta);

// ---------------------------------------------------------------------------
// Monte Carlo risk grids.
// ---------------------------------------------------------------------------

struct RiskMatrix {
  std::vector<std::string> estimator_labels;
  std::vector<std::string> perturbation_labels;
  Mat mean_loss;  // estimators x perturbations
  Mat std_error;
  long trials = 0;
  std::uint64_t master_seed = 0;
};

struct MinimaxSummary {
  double value = 0.0;
  int argmin_estimator = 0;
  int argmax_perturbation = 0;
  Vec per_estimator_worst_case;
};

struct CellResult {
  double mean = 0.0;
  double std_error = 0.0;
};

// One (perturbation, estimator) cell: per trial, derive a stream from
// (cell_seed, t), sample `sample_n` clean observations, perturb, estimate,
// and score.  Bit-identical output regardless of scheduling.
CellResult run_cell(const DistributionSpec& dist, int sample_n,
                    const PerturbationSpec& perturbation,
                    const EstimatorSpec& estimator, const LossSpec& loss,
                    long trials, std::uint64_t cell_seed);

// Full grid; cell (i, j) uses seed derived from (master_seed, i, j) and cells
// may run in parallel on `threads` workers without changing the result.
RiskMatrix run_matrix(const DistributionSpec& dist, int sample_n,
                      const std::vector<CatalogEntry>& perturbations,
                      const std::vector<EstimatorEntry>& estimators,
                      const LossSpec& loss, long trials,
                      std::uint64_t master_seed, int threads = 1);

// min over estimators of max over perturbations; ties to the lowest index.
MinimaxSummary minimax(const RiskMatrix& matrix);

// ---------------------------------------------------------------------------
// eps = n^alpha sweeps.
// ---------------------------------------------------------------------------

enum class ProblemKind { Location, LinearRegression, Uniform, Density };
const char* to_string(ProblemKind p);

struct ProblemSetup {
  ProblemKind problem = ProblemKind::Location;
  DistributionSpec dist;
  int sample_n = 10;
  std::vector<ShiftClass> shift_classes;
  LossSpec loss;
};

struct SweepRow {
  double alpha = 0.0;
  double eps = 0.0;
  ShiftClass shift_class = ShiftClass::CDS;
  double minimax_value = 0.0;
  double std_error = 0.0;
  double log_n_risk = 0.0;
  std::string argmin_estimator;
  std::string argmax_perturbation;
  TheoryBound theory;
};

// Full perturbation/estimator catalogs for the problem at a given eps.
std::vector<CatalogEntry> perturbation_catalog(const ProblemSetup& setup,
                                               double eps);
std::vector<EstimatorEntry> estimator_catalog(const ProblemSetup& setup);

// Theory bound matching the setup at (cls, eps).
TheoryBound theory_for(const ProblemSetup& setup, ShiftClass cls, double eps);

std::vector<SweepRow> epsilon_sweep(const ProblemSetup& setup,
                                    const std::vector<double>& alphas,
                                    long trials, std::uint64_t master_seed,
                                    int threads = 1);

}  // namespace wshift
