#include <doctest.h>

#include "wshift/risk_engine.hpp"

#include <cmath>

using namespace wshift;

namespace {

GaussianLocation make_gaussian() {
  GaussianLocation g;
  g.theta = Vec::Zero(3);
  g.sigma_cov = Mat::Zero(3, 3);
  g.sigma_cov.diagonal() << 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0;
  return g;
}

ProblemSetup location_setup() {
  ProblemSetup s;
  s.problem = ProblemKind::Location;
  s.dist = make_gaussian();
  s.sample_n = 10;
  s.shift_classes = {ShiftClass::CDS, ShiftClass::IDS, ShiftClass::JDS};
  s.loss = SquaredError{};
  return s;
}

}  // namespace

TEST_CASE("evaluate_loss variants") {
  Vec est(2), theta(2);
  est << 1.0, 2.0;
  theta << 0.0, 0.0;
  CHECK(evaluate_loss(SquaredError{}, est, theta) == doctest::Approx(5.0));

  Mat design(3, 2);
  design << 1, 0, 0, 1, 1, 1;
  CHECK(evaluate_loss(PredictionError{design}, est, theta) ==
        doctest::Approx((1.0 + 4.0 + 9.0) / 3.0));

  Vec scalar(1);
  scalar << 0.4;
  CHECK(evaluate_loss(PointwiseSquared{0.0, 0.1}, scalar, Vec()) ==
        doctest::Approx(0.09));
}

TEST_CASE("run_cell is deterministic and rejects tiny trial counts") {
  const DistributionSpec dist{make_gaussian()};
  const PerturbationSpec shift = JdsMeanShift{0.5};
  const auto a = run_cell(dist, 10, shift, SampleMean{}, SquaredError{}, 500, 7);
  const auto b = run_cell(dist, 10, shift, SampleMean{}, SquaredError{}, 500, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.std_error > 0.0);
  CHECK_THROWS_AS(
      run_cell(dist, 10, shift, SampleMean{}, SquaredError{}, 1, 7),
      std::invalid_argument);
}

TEST_CASE("run_matrix output is invariant to the thread count") {
  const ProblemSetup setup = location_setup();
  const auto perturbations = perturbation_catalog(setup, 0.1);
  const auto estimators = estimator_catalog(setup);
  const RiskMatrix one = run_matrix(setup.dist, 10, perturbations, estimators,
                                    setup.loss, 400, 99, 1);
  const RiskMatrix eight = run_matrix(setup.dist, 10, perturbations, estimators,
                                      setup.loss, 400, 99, 8);
  CHECK(one.mean_loss == eight.mean_loss);
  CHECK(one.std_error == eight.std_error);
}

TEST_CASE("minimax picks row-max then column-min with ties to lowest index") {
  RiskMatrix m;
  m.estimator_labels = {"a", "b", "c"};
  m.perturbation_labels = {"p", "q"};
  m.mean_loss = Mat(3, 2);
  m.mean_loss << 1.0, 3.0, 2.0, 2.5, 2.5, 2.0;
  m.std_error = Mat::Zero(3, 2);
  const MinimaxSummary s = minimax(m);
  CHECK(s.value == doctest::Approx(2.5));
  CHECK(s.argmin_estimator == 1);  // ties between rows b and c -> lowest index
  CHECK(s.argmax_perturbation == 1);
}

TEST_CASE("epsilon_sweep emits one row per (alpha, class), deterministically") {
  ProblemSetup setup = location_setup();
  const std::vector<double> alphas = {-1.0, -0.5};
  const auto rows = epsilon_sweep(setup, alphas, 200, 5, 1);
  REQUIRE(rows.size() == 6);
  const auto again = epsilon_sweep(setup, alphas, 200, 5, 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].minimax_value == again[i].minimax_value);
    CHECK(rows[i].eps ==
          doctest::Approx(std::pow(10.0, rows[i].alpha)).epsilon(1e-12));
    CHECK(rows[i].log_n_risk ==
          doctest::Approx(std::log(rows[i].minimax_value) / std::log(10.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("vectorized location recovers the regression prediction risk") {
  // Stacking p-dimensional location observations as a regression with
  // identity-block design X (np x p) and noise I_n (x) Sigma' turns the
  // location JDS risk at eps into p times the prediction risk at eps/sqrt(p).
  const int n = 7, p = 3;
  Mat sigma_small = Mat::Zero(p, p);
  sigma_small.diagonal() << 0.2, 0.5, 0.9;
  Mat design = Mat::Zero(n * p, p);
  Mat noise = Mat::Zero(n * p, n * p);
  for (int i = 0; i < n; ++i) {
    design.block(i * p, 0, p, p) = Mat::Identity(p, p);
    noise.block(i * p, i * p, p, p) = sigma_small;
  }
  for (double eps : {0.05, 0.3, 1.0}) {
    const double loc =
        *location_risk(ShiftClass::JDS, eps, n, p, sigma_small.trace()).exact;
    const double pred = *lr_risk(eps / std::sqrt(static_cast<double>(p)),
                                 design, noise, LrLossKind::Prediction)
                             .exact;
    CHECK(loc == doctest::Approx(p * pred).epsilon(1e-12));
  }
}

TEST_CASE("theory_for dispatches on the problem kind") {
  ProblemSetup setup = location_setup();
  CHECK(theory_for(setup, ShiftClass::JDS, 0.1).problem == "location");
  ProblemSetup uni;
  uni.problem = ProblemKind::Uniform;
  uni.dist = UniformLocation{3.0};
  uni.sample_n = 50;
  uni.loss = SquaredError{};
  CHECK(theory_for(uni, ShiftClass::CDS, 0.1).problem == "uniform");
}
