#include "wshift/risk_engine.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wshift {

const char* to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::Location: return "location";
    case ProblemKind::LinearRegression: return "linear_regression";
    case ProblemKind::Uniform: return "uniform";
    case ProblemKind::Density: return "density";
  }
  return "?";
}

double evaluate_loss(const LossSpec& loss, const Vec& estimate_value,
                     const Vec& theta) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SquaredError>) {
          if (estimate_value.size() != theta.size()) {
            throw std::invalid_argument("evaluate_loss: dimension mismatch");
          }
          return (estimate_value - theta).squaredNorm();
        } else if constexpr (std::is_same_v<T, PredictionError>) {
          if (estimate_value.size() != v.design.cols() ||
              theta.size() != v.design.cols()) {
            throw std::invalid_argument("evaluate_loss: design mismatch");
          }
          return (v.design * (estimate_value - theta)).squaredNorm() /
                 static_cast<double>(v.design.rows());
        } else {  // PointwiseSquared
          const double d = estimate_value(0) - v.true_value;
          return d * d;
        }
      },
      loss);
}

CellResult run_cell(const DistributionSpec& dist, int sample_n,
                    const PerturbationSpec& perturbation,
                    const EstimatorSpec& estimator, const LossSpec& loss,
                    long trials, std::uint64_t cell_seed) {
  if (trials < 2) throw std::invalid_argument("run_cell: trials must be >= 2");
  validate(dist);
  const Vec theta = true_parameter(dist);
  double mean = 0.0, m2 = 0.0;
  for (long t = 0; t < trials; ++t) {
    RngStream rng(derive_seed({cell_seed, static_cast<std::uint64_t>(t)}));
    const Mat clean = sample(dist, sample_n, rng);
    const Mat observed = apply(perturbation, clean, theta, rng);
    const Vec est = estimate(estimator, observed);
    const double l = evaluate_loss(loss, est, theta);
    if (!std::isfinite(l)) {
      throw std::runtime_error("run_cell: non-finite loss at trial " +
                               std::to_string(t));
    }
    const double d = l - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (l - mean);
  }
  CellResult r;
  r.mean = mean;
  r.std_error = std::sqrt(m2 / static_cast<double>(trials - 1) /
                          static_cast<double>(trials));
  return r;
}

RiskMatrix run_matrix(const DistributionSpec& dist, int sample_n,
                      const std::vector<CatalogEntry>& perturbations,
                      const std::vector<EstimatorEntry>& estimators,
                      const LossSpec& loss, long trials,
                      std::uint64_t master_seed, int threads) {
  if (perturbations.empty() || estimators.empty()) {
    throw std::invalid_argument("run_matrix: empty catalog");
  }
  const int rows = static_cast<int>(estimators.size());
  const int cols = static_cast<int>(perturbations.size());
  RiskMatrix out;
  out.trials = trials;
  out.master_seed = master_seed;
  for (const auto& e : estimators) out.estimator_labels.push_back(e.label);
  for (const auto& pt : perturbations) out.perturbation_labels.push_back(pt.label);
  out.mean_loss.resize(rows, cols);
  out.std_error.resize(rows, cols);

  const auto run_one = [&](int cell) {
    const int i = cell / cols;
    const int j = cell % cols;
    const std::uint64_t cell_seed =
        derive_seed({master_seed, static_cast<std::uint64_t>(i),
                     static_cast<std::uint64_t>(j)});
    try {
      const CellResult r = run_cell(dist, sample_n, perturbations[j].spec,
                                    estimators[i].spec, loss, trials, cell_seed);
      out.mean_loss(i, j) = r.mean;
      out.std_error(i, j) = r.std_error;
    } catch (const std::exception& e) {
      throw std::runtime_error("run_matrix: cell (" + estimators[i].label +
                               ", " + perturbations[j].label + "): " + e.what());
    }
  };

  const int cells = rows * cols;
  const int workers = std::max(1, std::min(threads, cells));
  if (workers == 1) {
    for (int c = 0; c < cells; ++c) run_one(c);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) {
          run_one(c);
        }
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(cells);  // stop other workers promptly
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

MinimaxSummary minimax(const RiskMatrix& matrix) {
  const long rows = matrix.mean_loss.rows();
  const long cols = matrix.mean_loss.cols();
  if (rows < 1 || cols < 1) throw std::invalid_argument("minimax: empty matrix");
  MinimaxSummary s;
  s.per_estimator_worst_case.resize(rows);
  std::vector<int> row_argmax(rows, 0);
  for (long i = 0; i < rows; ++i) {
    double worst = matrix.mean_loss(i, 0);
    int arg = 0;
    for (long j = 1; j < cols; ++j) {
      if (matrix.mean_loss(i, j) > worst) {
        worst = matrix.mean_loss(i, j);
        arg = static_cast<int>(j);
      }
    }
    s.per_estimator_worst_case(i) = worst;
    row_argmax[i] = arg;
  }
  s.argmin_estimator = 0;
  for (long i = 1; i < rows; ++i) {
    if (s.per_estimator_worst_case(i) <
        s.per_estimator_worst_case(s.argmin_estimator)) {
      s.argmin_estimator = static_cast<int>(i);
    }
  }
  s.value = s.per_estimator_worst_case(s.argmin_estimator);
  s.argmax_perturbation = row_argmax[s.argmin_estimator];
  return s;
}

std::vector<CatalogEntry> perturbation_catalog(const ProblemSetup& setup,
                                               double eps) {
  switch (setup.problem) {
    case ProblemKind::Location: {
      const auto& g = std::get<GaussianLocation>(setup.dist);
      return location_perturbation_catalog(eps, setup.sample_n,
                                           static_cast<int>(g.theta.size()),
                                           g.sigma_cov.trace());
    }
    case ProblemKind::LinearRegression: {
      const auto& m = std::get<LinearModel>(setup.dist);
      return lr_perturbation_catalog(eps, m.design, m.noise_cov);
    }
    case ProblemKind::Uniform:
      return uniform_perturbation_catalog(eps, setup.sample_n);
    case ProblemKind::Density:
      throw std::domain_error(
          "perturbation_catalog: density uses the dedicated pair builder");
  }
  throw std::domain_error("perturbation_catalog: unknown problem");
}

std::vector<EstimatorEntry> estimator_catalog(const ProblemSetup& setup) {
  switch (setup.problem) {
    case ProblemKind::Location:
      return location_estimator_catalog();
    case ProblemKind::LinearRegression: {
      const auto& m = std::get<LinearModel>(setup.dist);
      return lr_estimator_catalog(m.design, m.noise_cov);
    }
    case ProblemKind::Uniform:
      return uniform_estimator_catalog(setup.sample_n);
    case ProblemKind::Density:
      throw std::domain_error(
          "estimator_catalog: density uses the dedicated KDE runner");
  }
  throw std::domain_error("estimator_catalog: unknown problem");
}

TheoryBound theory_for(const ProblemSetup& setup, ShiftClass cls, double eps) {
  switch (setup.problem) {
    case ProblemKind::Location: {
      const auto& g = std::get<GaussianLocation>(setup.dist);
      return location_risk(cls, eps, setup.sample_n,
                           static_cast<int>(g.theta.size()),
                           g.sigma_cov.trace());
    }
    case ProblemKind::LinearRegression: {
      const auto& m = std::get<LinearModel>(setup.dist);
      const LrLossKind kind = std::holds_alternative<PredictionError>(setup.loss)
                                  ? LrLossKind::Prediction
                                  : LrLossKind::Squared;
      TheoryBound b = lr_risk(eps, m.design, m.noise_cov, kind);
      b.shift_class = cls;
      return b;
    }
    case ProblemKind::Uniform:
      return uniform_bounds(cls, eps, setup.sample_n);
    case ProblemKind::Density: {
      const auto& d = std::get<HolderBumpDensity>(setup.dist);
      return density_bounds(eps, static_cast<double>(setup.sample_n), d.s);
    }
  }
  throw std::domain_error("theory_for: unknown problem");
}

std::vector<SweepRow> epsilon_sweep(const ProblemSetup& setup,
                                    const std::vector<double>& alphas,
                                    long trials, std::uint64_t master_seed,
                                    int threads) {
  if (setup.sample_n < 2) {
    throw std::domain_error("epsilon_sweep: sample_n must be >= 2 (log n > 0)");
  }
  const double n = static_cast<double>(setup.sample_n);
  std::vector<SweepRow> rows;
  const auto estimators = estimator_catalog(setup);
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    const double eps = std::pow(n, alpha);
    const auto catalog = perturbation_catalog(setup, eps);
    for (std::size_t ci = 0; ci < setup.shift_classes.size(); ++ci) {
      const ShiftClass cls = setup.shift_classes[ci];
      std::vector<CatalogEntry> subset;
      for (const auto& entry : catalog) {
        if (entry.shift_class == cls) subset.push_back(entry);
      }
      SweepRow row;
      row.alpha = alpha;
      row.eps = eps;
      row.shift_class = cls;
      row.theory = theory_for(setup, cls, eps);
      if (!subset.empty()) {
        const std::uint64_t seed = derive_seed(
            {master_seed, static_cast<std::uint64_t>(ai),
             static_cast<std::uint64_t>(ci)});
        const RiskMatrix matrix =
            run_matrix(setup.dist, setup.sample_n, subset, estimators,
                       setup.loss, trials, seed, threads);
        const MinimaxSummary mm = minimax(matrix);
        row.minimax_value = mm.value;
        row.std_error = matrix.std_error(mm.argmin_estimator, mm.argmax_perturbation);
        row.log_n_risk = std::log(mm.value) / std::log(n);
        row.argmin_estimator = matrix.estimator_labels[mm.argmin_estimator];
        row.argmax_perturbation = matrix.perturbation_labels[mm.argmax_perturbation];
      } else {
        // No empirical perturbation in this class (e.g. IDS for the uniform
        // problem); theory columns still apply.
        row.minimax_value = std::numeric_limits<double>::quiet_NaN();
        row.std_error = std::numeric_limits<double>::quiet_NaN();
        row.log_n_risk = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace wshift
