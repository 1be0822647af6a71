#include <doctest.h>

#include "wshift/verify.hpp"

using namespace wshift;

namespace {

ExperimentConfig small_location_config() {
  ExperimentConfig c;
  c.problem = ProblemKind::Location;
  GaussianLocation g;
  g.theta = Vec::Zero(3);
  g.sigma_cov = Mat::Zero(3, 3);
  g.sigma_cov.diagonal() << 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0;
  c.dist = g;
  c.sample_n = 10;
  c.shift_classes = {ShiftClass::JDS};
  c.eps_list = std::vector<double>{0.1};
  c.trials = 4000;
  c.master_seed = 17;
  c.loss = SquaredError{};
  return c;
}

}  // namespace

TEST_CASE("identity suite passes") {
  const VerifyReport report = run_identity_suite();
  CHECK(report.checks.size() >= 6);
  for (const auto& check : report.checks) {
    CHECK_MESSAGE(check.passed, check.name, ": ", check.detail);
  }
}

TEST_CASE("default location verification passes end to end") {
  const VerifyReport report = run_verify(small_location_config());
  CHECK(report.all_passed());
  CHECK(report.render().find("FAIL") == std::string::npos);
}

TEST_CASE("corrupted theory values fail with a named check") {
  VerifyOptions options;
  options.corrupt_theory_offset = 0.5;  // negative control
  const VerifyReport report = run_verify(small_location_config(), options);
  CHECK_FALSE(report.all_passed());
  bool named = false;
  for (const auto& check : report.checks) {
    if (!check.passed && check.name.find("location/JDS") != std::string::npos) {
      named = true;
    }
  }
  CHECK(named);
  CHECK(report.failures_json().find("location/JDS") != std::string::npos);
}
