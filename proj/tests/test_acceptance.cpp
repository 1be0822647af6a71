// Acceptance suite: each test case prints exactly one [PASS]/[FAIL] line for
// its criterion and fails the build on regression.  Tolerances are pinned in
// code; Monte Carlo comparisons use three standard errors unless noted.

#include <doctest.h>

#include "wshift/config.hpp"
#include "wshift/density.hpp"
#include "wshift/estimators.hpp"
#include "wshift/quadrature.hpp"
#include "wshift/risk_engine.hpp"
#include "wshift/theory_bounds.hpp"
#include "wshift/transport.hpp"
#include "wshift/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace wshift;

namespace {

constexpr long kExactTrials = 100000;
constexpr long kMatrixTrials = 5000;

struct Criterion {
  explicit Criterion(std::string label) : label_(std::move(label)) {}
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  ~Criterion() {
    std::printf("[%s] %s%s\n", failures_.empty() ? "PASS" : "FAIL",
                label_.c_str(),
                failures_.empty() ? ""
                                  : (" -- " + failures_.front()).c_str());
    std::fflush(stdout);
  }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    std::ostringstream out;
    for (const auto& f : failures_) out << f << "; ";
    return out.str();
  }

 private:
  std::string label_;
  std::vector<std::string> failures_;
};

GaussianLocation reference_gaussian() {
  GaussianLocation g;
  g.theta = Vec::Zero(3);
  g.sigma_cov = Mat::Zero(3, 3);
  g.sigma_cov.diagonal() << 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0;
  return g;
}

Mat reference_design() {
  RngStream rng(derive_seed({20240501ull}));
  Mat design(10, 5);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 5; ++j) {
      design(i, j) = rng.normal() / std::sqrt(10.0);
    }
  }
  return design;
}

std::string describe_gap(double observed, double target, double tol) {
  std::ostringstream out;
  out << "observed " << observed << " vs " << target << " (tol " << tol << ")";
  return out.str();
}

}  // namespace

TEST_CASE("A01 location JDS exactness") {
  Criterion c("criterion 1: location JDS risk equals (eps + sqrt(0.1))^2");
  const GaussianLocation g = reference_gaussian();
  const DistributionSpec dist{g};
  const double tr = g.sigma_cov.trace();
  for (double eps : {0.0, 0.1, 0.5, 1.0}) {
    const PerturbationSpec shift =
        least_favorable_location(ShiftClass::JDS, eps, 10, 3, tr);
    const CellResult r =
        run_cell(dist, 10, shift, SampleMean{}, SquaredError{}, kExactTrials,
                 derive_seed({1001ull, static_cast<std::uint64_t>(eps * 1e6)}));
    const double target = std::pow(eps + std::sqrt(0.1), 2);
    c.require(std::fabs(r.mean - target) <= 3.0 * r.std_error,
              "eps=" + std::to_string(eps) + ": " +
                  describe_gap(r.mean, target, 3.0 * r.std_error));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A02 location IDS transition") {
  Criterion c("criterion 2: IDS risk matches the piecewise formula across the "
              "transition");
  const GaussianLocation g = reference_gaussian();
  const DistributionSpec dist{g};
  const double tr = g.sigma_cov.trace();  // 1, so the transition is at 1/9
  for (double eps : {0.05, 1.0 / 9.0, 0.2}) {
    const PerturbationSpec shift =
        least_favorable_location(ShiftClass::IDS, eps, 10, 3, tr);
    const CellResult r =
        run_cell(dist, 10, shift, SampleMean{}, SquaredError{}, kExactTrials,
                 derive_seed({1002ull, static_cast<std::uint64_t>(eps * 1e6)}));
    const double target = *location_risk(ShiftClass::IDS, eps, 10, 3, tr).exact;
    c.require(std::fabs(r.mean - target) <= 3.0 * r.std_error,
              "eps=" + std::to_string(eps) + ": " +
                  describe_gap(r.mean, target, 3.0 * r.std_error));
  }
  // Branch agreement at the transition point (algebraic identity).
  const double eps_star = std::sqrt(tr) / 9.0;
  const double small_branch = std::pow(eps_star + std::sqrt(tr), 2) / 10.0;
  const double large_branch = eps_star * eps_star + tr / 9.0;
  c.require(std::fabs(small_branch - large_branch) <=
                1e-12 * std::max(small_branch, large_branch),
            "branch mismatch at the transition: " +
                describe_gap(small_branch, large_branch, 1e-12));
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A03 regression prediction exactness") {
  Criterion c("criterion 3: LS prediction risk equals (eps + 0.1 sqrt(0.5))^2");
  LinearModel m;
  m.design = reference_design();
  m.theta = Vec::Ones(5);
  m.noise_cov = Mat::Identity(10, 10) / 100.0;
  const DistributionSpec dist{m};
  for (double eps : {0.0, 0.05, 0.2}) {
    const PerturbationSpec shift =
        least_favorable_lr(eps, m.design, m.noise_cov);
    const CellResult r = run_cell(
        dist, 10, shift, LeastSquares{m.design}, PredictionError{m.design},
        kExactTrials, derive_seed({1003ull, static_cast<std::uint64_t>(eps * 1e6)}));
    const double target = std::pow(eps + 0.1 * std::sqrt(0.5), 2);
    c.require(std::fabs(r.mean - target) <= 3.0 * r.std_error,
              "eps=" + std::to_string(eps) + ": " +
                  describe_gap(r.mean, target, 3.0 * r.std_error));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A04 heteroskedastic GLS") {
  Criterion c("criterion 4: GLS prediction risk exact under heteroskedastic "
              "noise, GLS dominates LS");
  LinearModel m;
  m.design = reference_design();
  m.theta = Vec::Ones(5);
  m.noise_cov = Mat::Zero(10, 10);
  for (int i = 0; i < 10; ++i) m.noise_cov(i, i) = (i + 1) / 200.0;
  const DistributionSpec dist{m};
  const double tr_sp =
      (m.noise_cov * oblique_projector(m.design, m.noise_cov)).trace();
  for (double eps : {0.0, 0.1}) {
    const PerturbationSpec shift =
        least_favorable_lr(eps, m.design, m.noise_cov);
    const CellResult r = run_cell(
        dist, 10, shift, GeneralizedLeastSquares{m.design, m.noise_cov},
        PredictionError{m.design}, kExactTrials,
        derive_seed({1004ull, static_cast<std::uint64_t>(eps * 1e6)}));
    const double target = std::pow(eps + std::sqrt(tr_sp / 10.0), 2);
    c.require(std::fabs(r.mean - target) <= 3.0 * r.std_error,
              "eps=" + std::to_string(eps) + ": " +
                  describe_gap(r.mean, target, 3.0 * r.std_error));
  }
  // Worst-case dominance over the simulation catalog, 3-SE slack.
  for (double eps : {0.05, 0.2}) {
    const auto perturbations =
        lr_perturbation_catalog(eps, m.design, m.noise_cov);
    const auto estimators = lr_estimator_catalog(m.design, m.noise_cov);
    const RiskMatrix matrix = run_matrix(
        dist, 10, perturbations, estimators, PredictionError{m.design},
        20000, derive_seed({1014ull, static_cast<std::uint64_t>(eps * 1e6)}), 1);
    // Row 0: least squares, row 1: generalized least squares.
    double ls_worst = 0.0, gls_worst = 0.0, ls_se = 0.0, gls_se = 0.0;
    for (long j = 0; j < matrix.mean_loss.cols(); ++j) {
      if (matrix.mean_loss(0, j) > ls_worst) {
        ls_worst = matrix.mean_loss(0, j);
        ls_se = matrix.std_error(0, j);
      }
      if (matrix.mean_loss(1, j) > gls_worst) {
        gls_worst = matrix.mean_loss(1, j);
        gls_se = matrix.std_error(1, j);
      }
    }
    c.require(gls_worst <= ls_worst + 3.0 * (ls_se + gls_se),
              "eps=" + std::to_string(eps) + ": GLS worst case " +
                  describe_gap(gls_worst, ls_worst, 3.0 * (ls_se + gls_se)));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A05 uniform CDS exactness") {
  Criterion c("criterion 5: uniform midrange CDS risk equals eps^2 + 1/5304");
  const DistributionSpec dist{UniformLocation{3.0}};
  for (double eps : {0.0, 0.01, 0.1}) {
    Vec delta(1);
    delta << eps;
    const CellResult r =
        run_cell(dist, 50, ConstantShift{delta}, Midrange{1}, SquaredError{},
                 kExactTrials,
                 derive_seed({1005ull, static_cast<std::uint64_t>(eps * 1e6)}));
    const double target = eps * eps + 1.0 / 5304.0;
    c.require(std::fabs(r.mean - target) <= 3.0 * r.std_error,
              "eps=" + std::to_string(eps) + ": " +
                  describe_gap(r.mean, target, 3.0 * r.std_error));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A06 uniform sandwich") {
  Criterion c("criterion 6: uniform empirical minimax sits between the IDS "
              "lower and JDS upper bounds");
  const int n = 50;
  const DistributionSpec dist{UniformLocation{3.0}};
  const auto estimators = uniform_estimator_catalog(n);
  for (double alpha : {-2.5, -2.0, -1.5, -1.0, -0.5, 0.0}) {
    const double eps = std::pow(static_cast<double>(n), alpha);
    const auto perturbations = uniform_perturbation_catalog(eps, n);
    const RiskMatrix matrix = run_matrix(
        dist, n, perturbations, estimators, SquaredError{}, kMatrixTrials,
        derive_seed({1006ull, static_cast<std::uint64_t>(alpha * 1e3 + 1e6)}),
        1);
    const MinimaxSummary mm = minimax(matrix);
    const double se = matrix.std_error(mm.argmin_estimator, mm.argmax_perturbation);
    const double lower = *uniform_bounds(ShiftClass::IDS, eps, n).lower;
    const double upper = *uniform_bounds(ShiftClass::JDS, eps, n).upper;
    c.require(lower - 3.0 * se <= mm.value,
              "alpha=" + std::to_string(alpha) + ": minimax " +
                  describe_gap(mm.value, lower, 3.0 * se) + " below lower");
    c.require(mm.value <= upper + 3.0 * se,
              "alpha=" + std::to_string(alpha) + ": minimax " +
                  describe_gap(mm.value, upper, 3.0 * se) + " above upper");
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A07 smoothed uniform closed forms") {
  Criterion c("criterion 7: smoothed-uniform Fisher information and W2 match "
              "their closed forms");
  for (double tau : {0.05, 0.1, 0.25, 0.5}) {
    const double fisher = fisher_info_smoothed_uniform_numeric(tau);
    c.require(std::fabs(fisher - M_PI / tau) <= 1e-6 * (M_PI / tau),
              "tau=" + std::to_string(tau) + " fisher " +
                  describe_gap(fisher, M_PI / tau, 1e-6));
    const double w2 = w2_1d(DistributionSpec{UniformLocation{0.0}},
                            DistributionSpec{SmoothedUniform{0.0, tau}}, 1e-13);
    const double closed = w2_smoothed_uniform_closed(tau);
    c.require(std::fabs(w2 - closed) <= 1e-6 * closed,
              "tau=" + std::to_string(tau) + " W2 " +
                  describe_gap(w2, closed, 1e-6));
  }
  const double constant =
      1.0 / (M_PI * std::cbrt(smoothed_uniform_w2_constant()));
  c.require(constant >= 0.614,
            "CRLB constant " + describe_gap(constant, 0.614, 0.0));
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A08 gaussian W2 oracle") {
  Criterion c("criterion 8: quadrature W2 matches the Gaussian closed form on "
              "a 5x5 grid");
  const double shifts[5] = {0.1, 0.3, 0.7, 1.2, 2.0};
  const double ratios[5] = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (double d : shifts) {
    for (double r : ratios) {
      GaussianLocation a, b;
      a.theta = Vec::Zero(1);
      a.sigma_cov = Mat::Identity(1, 1);
      b.theta = Vec::Constant(1, d);
      b.sigma_cov = Mat::Identity(1, 1) * r;
      const double closed =
          w2_gaussian(a.theta, a.sigma_cov, b.theta, b.sigma_cov);
      const double numeric =
          w2_1d(DistributionSpec{a}, DistributionSpec{b}, 1e-13);
      c.require(std::fabs(numeric - closed) <= 1e-6 * closed,
                "shift=" + std::to_string(d) + " ratio=" + std::to_string(r) +
                    ": " + describe_gap(numeric, closed, 1e-6));
    }
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A09 bayes limit identities") {
  Criterion c("criterion 9: Bayes posterior limits agree with the closed-form "
              "risks");
  const GaussianLocation g = reference_gaussian();
  const double tr = g.sigma_cov.trace();
  for (double eps : {0.1, 0.5}) {
    const double mj = *location_risk(ShiftClass::JDS, eps, 10, 3, tr).exact;
    const double limit =
        bayes_posterior_location_limit(eps, 10, 3, g.sigma_cov, ShiftClass::JDS);
    c.require(std::fabs(limit - mj) <= 1e-12 * mj,
              "JDS limit eps=" + std::to_string(eps) + ": " +
                  describe_gap(limit, mj, 1e-12));
    const double finite =
        bayes_posterior_location(eps, 10, 3, g.sigma_cov, 1e6, ShiftClass::JDS);
    c.require(std::fabs(finite - limit) <= 1e-5 * limit,
              "finite b eps=" + std::to_string(eps) + ": " +
                  describe_gap(finite, limit, 1e-5));
  }
  const Mat design = reference_design();
  const Mat noise = Mat::Identity(10, 10) / 100.0;
  for (double eps : {0.05, 0.2}) {
    const double exact =
        *lr_risk(eps, design, noise, LrLossKind::Prediction).exact;
    const double limit =
        bayes_posterior_lr_limit(eps, design, noise, LrLossKind::Prediction);
    c.require(std::fabs(limit - exact) <= 1e-12 * exact,
              "LR limit eps=" + std::to_string(eps) + ": " +
                  describe_gap(limit, exact, 1e-12));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A10 ordering and monotonicity") {
  Criterion c("criterion 10: CDS <= IDS <= JDS in formula and in empirical "
              "worst-case risk");
  const GaussianLocation g = reference_gaussian();
  const double tr = g.sigma_cov.trace();
  // Formula ordering on a 50-point grid (exact).
  for (int i = 0; i < 50; ++i) {
    const double eps = 2.0 * (i + 1) / 50.0;
    const double m0 = tr / 10.0;
    const double mc = *location_risk(ShiftClass::CDS, eps, 10, 3, tr).exact;
    const double mi = *location_risk(ShiftClass::IDS, eps, 10, 3, tr).exact;
    const double mj = *location_risk(ShiftClass::JDS, eps, 10, 3, tr).exact;
    c.require(m0 <= mc + 1e-15 && mc <= mi + 1e-15 && mi <= mj + 1e-15,
              "formula ordering broken at eps=" + std::to_string(eps));
  }
  // Empirical class ordering with combined 3-SE slack.
  const DistributionSpec dist{g};
  const auto estimators = location_estimator_catalog();
  for (double eps : {0.05, 0.2, 1.0}) {
    double values[3] = {0, 0, 0}, ses[3] = {0, 0, 0};
    const ShiftClass classes[3] = {ShiftClass::CDS, ShiftClass::IDS,
                                   ShiftClass::JDS};
    const auto catalog = location_perturbation_catalog(eps, 10, 3, tr);
    for (int k = 0; k < 3; ++k) {
      std::vector<CatalogEntry> subset;
      for (const auto& entry : catalog) {
        if (entry.shift_class == classes[k]) subset.push_back(entry);
      }
      const RiskMatrix matrix = run_matrix(
          dist, 10, subset, estimators, SquaredError{}, 20000,
          derive_seed({1010ull, static_cast<std::uint64_t>(eps * 1e6),
                       static_cast<std::uint64_t>(k)}),
          1);
      const MinimaxSummary mm = minimax(matrix);
      values[k] = mm.value;
      ses[k] = matrix.std_error(mm.argmin_estimator, mm.argmax_perturbation);
    }
    c.require(values[0] <= values[1] + 3.0 * (ses[0] + ses[1]),
              "eps=" + std::to_string(eps) + ": CDS > IDS");
    c.require(values[1] <= values[2] + 3.0 * (ses[1] + ses[2]),
              "eps=" + std::to_string(eps) + ": IDS > JDS");
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A11 budget validation") {
  Criterion c("criterion 11: every catalog perturbation respects the "
              "per-observation W2 budget");
  const double eps = 0.2;
  // Location catalog.
  {
    const GaussianLocation g = reference_gaussian();
    const DistributionSpec dist{g};
    for (const auto& entry :
         location_perturbation_catalog(eps, 10, 3, g.sigma_cov.trace())) {
      Mat clean(10 * kMatrixTrials, 3), shifted(10 * kMatrixTrials, 3);
      for (long t = 0; t < kMatrixTrials; ++t) {
        RngStream rng(derive_seed({1011ull, static_cast<std::uint64_t>(t)}));
        const Mat x = sample(dist, 10, rng);
        clean.middleRows(10 * t, 10) = x;
        shifted.middleRows(10 * t, 10) = apply(entry.spec, x, g.theta, rng);
      }
      const auto report =
          empirical_coupling_cost(clean, shifted, eps * eps, 10);
      c.require(report.within_budget,
                "location/" + entry.label + ": cost " +
                    describe_gap(report.mean_sq_displacement, eps * eps,
                                 3.0 * report.std_error));
    }
  }
  // Regression catalog (rows of Y are the coupled coordinates).
  {
    LinearModel m;
    m.design = reference_design();
    m.theta = Vec::Ones(5);
    m.noise_cov = Mat::Identity(10, 10) / 100.0;
    const DistributionSpec dist{m};
    for (const auto& entry :
         lr_perturbation_catalog(eps, m.design, m.noise_cov)) {
      Mat clean(10 * kMatrixTrials, 1), shifted(10 * kMatrixTrials, 1);
      for (long t = 0; t < kMatrixTrials; ++t) {
        RngStream rng(derive_seed({1012ull, static_cast<std::uint64_t>(t)}));
        const Mat y = sample(dist, 10, rng);
        clean.middleRows(10 * t, 10) = y;
        Vec theta_full = m.theta;
        shifted.middleRows(10 * t, 10) = apply(entry.spec, y, theta_full, rng);
      }
      const auto report =
          empirical_coupling_cost(clean, shifted, eps * eps, 10);
      c.require(report.within_budget,
                "regression/" + entry.label + ": cost " +
                    describe_gap(report.mean_sq_displacement, eps * eps,
                                 3.0 * report.std_error));
    }
  }
  // Uniform catalog.
  {
    const DistributionSpec dist{UniformLocation{3.0}};
    const Vec theta = Vec::Constant(1, 3.0);
    for (const auto& entry : uniform_perturbation_catalog(eps, 50)) {
      Mat clean(50 * kMatrixTrials, 1), shifted(50 * kMatrixTrials, 1);
      for (long t = 0; t < kMatrixTrials; ++t) {
        RngStream rng(derive_seed({1013ull, static_cast<std::uint64_t>(t)}));
        const Mat x = sample(dist, 50, rng);
        clean.middleRows(50 * t, 50) = x;
        shifted.middleRows(50 * t, 50) = apply(entry.spec, x, theta, rng);
      }
      const auto report =
          empirical_coupling_cost(clean, shifted, eps * eps, 50);
      c.require(report.within_budget,
                "uniform/" + entry.label + ": cost " +
                    describe_gap(report.mean_sq_displacement, eps * eps,
                                 3.0 * report.std_error));
    }
  }
  // IDS budget identity.
  for (double e : {0.05, 0.2, 1.0}) {
    const auto spec = least_favorable_location(ShiftClass::IDS, e, 10, 3, 1.0);
    const auto& ids = std::get<IdsLeastFavorable>(spec);
    const double combo = ids.zeta * ids.zeta + ids.psi * ids.psi;
    c.require(std::fabs(combo - e * e) <= 1e-12,
              "IDS identity at eps=" + std::to_string(e) + ": " +
                  describe_gap(combo, e * e, 1e-12));
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A12 density rates" * doctest::timeout(600)) {
  Criterion c("criterion 12: density rate slopes and bound coincidence");
  // (a) eps = 0: KDE slope across a geometric n grid within 0.1 of -4/5.
  {
    DensityShiftPair pair;
    pair.clean = HolderBumpDensity{0.0, 2.0, 3.0, 2.0, 0.5, 0};
    pair.shifted = pair.clean;
    pair.x0 = 0.0;
    std::vector<long> grid;
    for (int k = 8; k <= 16; ++k) grid.push_back(1L << k);
    const auto curve = kde_risk_curve(pair, grid, 400, 1012, 0.0);
    std::vector<double> xs, ys;
    for (const auto& point : curve) {
      xs.push_back(static_cast<double>(point.n));
      ys.push_back(point.mean_risk);
    }
    const double slope = loglog_slope(xs, ys);
    c.require(std::fabs(slope + 0.8) <= 0.1,
              "KDE slope " + describe_gap(slope, -0.8, 0.1));
  }
  // (b) pointwise gap slope in eps within 0.1 of 2s/(2s+1) = 4/5.
  {
    std::vector<double> xs, ys;
    for (double eps : {0.1, 0.2, 0.4, 0.8}) {
      xs.push_back(eps);
      ys.push_back(build_pair(eps, 2.0, 3.0, 2.0, 0.0).pointwise_gap);
    }
    const double slope = loglog_slope(xs, ys);
    c.require(std::fabs(slope - 0.8) <= 0.1,
              "gap slope " + describe_gap(slope, 0.8, 0.1));
  }
  // (c) bounds coincide exactly iff eps <= n^{-(s+2)/(2s+1)}.
  for (double s : {2.0, 5.0}) {
    for (double n : {100.0, 10000.0}) {
      const double threshold = std::pow(n, -(s + 2.0) / (2.0 * s + 1.0));
      const auto at = density_bounds(threshold, n, s);
      const auto below = density_bounds(0.5 * threshold, n, s);
      const auto above = density_bounds(2.0 * threshold, n, s);
      c.require(std::fabs(*at.lower - *at.upper) <= 1e-12 * *at.upper &&
                    std::fabs(*below.lower - *below.upper) <=
                        1e-12 * *below.upper,
                "bounds should coincide below the threshold (s=" +
                    std::to_string(s) + ")");
      c.require(*above.lower < *above.upper,
                "bounds should separate above the threshold (s=" +
                    std::to_string(s) + ")");
    }
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A13 sweep determinism") {
  Criterion c("criterion 13: sweep output is byte-identical across runs and "
              "thread counts");
  const std::string work = WSHIFT_WORK_DIR;
  const std::string cli = WSHIFT_CLI_PATH;
  const std::string config_path = work + "/a13_config.json";
  {
    std::ofstream out(config_path);
    out << R"({
      "problem": "location",
      "dist": {"kind": "gaussian_location",
               "sigma_cov": [[0.16666666666666666, 0, 0],
                             [0, 0.3333333333333333, 0],
                             [0, 0, 0.5]]},
      "sample_n": 10,
      "shift_classes": ["CDS", "IDS", "JDS"],
      "alphas": [-2.0, -1.0, 0.0],
      "trials": 400,
      "master_seed": 31
    })";
  }
  const auto run = [&](const std::string& out_path, int threads) {
    const std::string command = "\"" + cli + "\" sweep --config \"" +
                                config_path + "\" --threads " +
                                std::to_string(threads) + " --out \"" +
                                out_path + "\"";
    return std::system(command.c_str());
  };
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string p1 = work + "/a13_t1.csv";
  const std::string p1b = work + "/a13_t1_again.csv";
  const std::string p8 = work + "/a13_t8.csv";
  c.require(run(p1, 1) == 0, "single-thread run failed");
  c.require(run(p1b, 1) == 0, "repeat run failed");
  c.require(run(p8, 8) == 0, "eight-thread run failed");
  const std::string body = slurp(p1);
  c.require(!body.empty(), "empty sweep output");
  c.require(body == slurp(p1b), "repeat run differs byte-for-byte");
  c.require(body == slurp(p8), "thread count changed the output bytes");
  CHECK_MESSAGE(c.ok(), c.detail());
}

TEST_CASE("A14 lower bound tool sanity") {
  Criterion c("criterion 14: Le Cam / Fano / Assouad bounds never exceed the "
              "exact IDS risk");
  const auto squared = [](double m) { return m * m; };
  for (double eps : {0.02, 0.1, 0.3}) {
    for (double n : {5.0, 20.0, 100.0}) {
      for (double p : {2.0, 5.0}) {
        const double sigma = 1.0;
        const double mi = *location_risk(ShiftClass::IDS, eps,
                                         static_cast<int>(n),
                                         static_cast<int>(p), sigma * sigma * p)
                               .exact;
        LowerBoundParams params;
        params.eps = eps;
        params.sigma = sigma;
        params.n = n;
        params.p = p;
        const double lecam =
            lower_bound_tool(LowerBoundTool::LeCamGauss1D, params, squared);
        const double fano =
            lower_bound_tool(LowerBoundTool::FanoGauss, params, squared);
        const double assouad =
            lower_bound_tool(LowerBoundTool::AssouadGauss, params, squared);
        const std::string tag = " at (eps=" + std::to_string(eps) +
                                ", n=" + std::to_string(n) +
                                ", p=" + std::to_string(p) + ")";
        c.require(lecam <= mi + 1e-12, "LeCam " + describe_gap(lecam, mi, 0) + tag);
        c.require(fano <= mi + 1e-12, "Fano " + describe_gap(fano, mi, 0) + tag);
        c.require(assouad <= mi + 1e-12,
                  "Assouad " + describe_gap(assouad, mi, 0) + tag);
      }
    }
  }
  CHECK_MESSAGE(c.ok(), c.detail());
}
