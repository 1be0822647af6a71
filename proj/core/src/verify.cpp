#include "wshift/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace wshift {

namespace {

double sq(double x) { return x * x; }

double rel_err(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

CheckResult rel_check(const std::string& name, double observed, double expected,
                      double tol) {
  CheckResult c;
  c.name = name;
  c.observed = observed;
  c.expected = expected;
  c.tolerance = tol;
  c.passed = rel_err(observed, expected) <= tol;
  if (!c.passed) {
    std::ostringstream d;
    d << "relative error " << rel_err(observed, expected) << " > " << tol;
    c.detail = d.str();
  }
  return c;
}

CheckResult le_check(const std::string& name, double lhs, double rhs,
                     double slack) {
  CheckResult c;
  c.name = name;
  c.observed = lhs;
  c.expected = rhs;
  c.tolerance = slack;
  c.passed = lhs <= rhs + slack;
  if (!c.passed) {
    std::ostringstream d;
    d << lhs << " > " << rhs << " + " << slack;
    c.detail = d.str();
  }
  return c;
}

std::vector<double> eps_grid(const ExperimentConfig& config) {
  if (config.eps_list) return *config.eps_list;
  std::vector<double> grid;
  const double n = static_cast<double>(config.sample_n);
  for (double a : *config.alphas) grid.push_back(std::pow(n, a));
  return grid;
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string VerifyReport::render() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  observed="
        << format_double(c.observed) << " expected=" << format_double(c.expected);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
  return out.str();
}

std::string VerifyReport::failures_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    if (c.passed) continue;
    nlohmann::json j;
    j["check"] = c.name;
    j["observed"] = c.observed;
    j["expected"] = c.expected;
    j["tolerance"] = c.tolerance;
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

VerifyReport run_verify(const ExperimentConfig& config,
                        const VerifyOptions& options) {
  VerifyReport report;
  const ProblemSetup setup = to_setup(config);
  const auto estimators = estimator_catalog(setup);
  const std::vector<double> grid = eps_grid(config);

  for (std::size_t ei = 0; ei < grid.size(); ++ei) {
    const double eps = grid[ei];
    const auto catalog = perturbation_catalog(setup, eps);
    for (std::size_t ci = 0; ci < setup.shift_classes.size(); ++ci) {
      const ShiftClass cls = setup.shift_classes[ci];
      std::vector<CatalogEntry> subset;
      for (const auto& entry : catalog) {
        if (entry.shift_class == cls) subset.push_back(entry);
      }
      if (subset.empty()) continue;
      const std::uint64_t seed =
          derive_seed({config.master_seed, static_cast<std::uint64_t>(ei),
                       static_cast<std::uint64_t>(ci)});
      const RiskMatrix matrix =
          run_matrix(setup.dist, setup.sample_n, subset, estimators, setup.loss,
                     config.trials, seed, options.threads);
      const MinimaxSummary mm = minimax(matrix);
      const double se = matrix.std_error(mm.argmin_estimator, mm.argmax_perturbation);

      TheoryBound bound = theory_for(setup, cls, eps);
      std::ostringstream tag;
      tag << to_string(setup.problem) << '/' << to_string(cls)
          << "/eps=" << format_double(eps);
      if (bound.exact) {
        const double target = *bound.exact + options.corrupt_theory_offset;
        CheckResult c;
        c.name = tag.str() + "/exact";
        c.observed = mm.value;
        c.expected = target;
        c.tolerance = 3.0 * se;
        c.passed = std::fabs(mm.value - target) <= 3.0 * se;
        if (!c.passed) {
          std::ostringstream d;
          d << "|" << mm.value << " - " << target << "| > 3 SE = " << 3.0 * se;
          c.detail = d.str();
        }
        report.checks.push_back(c);
      } else {
        if (bound.lower && !bound.rate_only) {
          report.checks.push_back(
              le_check(tag.str() + "/lower",
                       *bound.lower + options.corrupt_theory_offset, mm.value,
                       3.0 * se));
        }
        if (bound.upper && !bound.rate_only) {
          report.checks.push_back(le_check(
              tag.str() + "/upper", mm.value,
              *bound.upper + options.corrupt_theory_offset, 3.0 * se));
        }
      }
    }
  }

  const VerifyReport identities = run_identity_suite();
  report.checks.insert(report.checks.end(), identities.checks.begin(),
                       identities.checks.end());
  return report;
}

VerifyReport run_identity_suite() {
  VerifyReport report;
  const int n = 10, p = 3;
  Mat sigma = Mat::Zero(p, p);
  sigma.diagonal() << 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0;
  const double tr = sigma.trace();

  // IDS branch continuity at the transition eps* = sqrt(tr)/(n-1).
  {
    const double eps_star = std::sqrt(tr) / (n - 1);
    const double small_branch = sq(eps_star + std::sqrt(tr)) / n;
    const double large_branch = eps_star * eps_star + tr / (n - 1);
    report.checks.push_back(
        rel_check("identity/ids_branch_continuity", small_branch, large_branch,
                  1e-12));
  }

  // Ordering M(0) <= M_C <= M_I <= M_J on a 50-point eps grid.
  {
    bool ok = true;
    double worst_gap = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double eps = 2.0 * (i + 1) / 50.0;
      const double m0 = tr / n;
      const double mc = *location_risk(ShiftClass::CDS, eps, n, p, tr).exact;
      const double mi = *location_risk(ShiftClass::IDS, eps, n, p, tr).exact;
      const double mj = *location_risk(ShiftClass::JDS, eps, n, p, tr).exact;
      const double gap =
          std::max({m0 - mc, mc - mi, mi - mj});
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap <= 1e-15;
    }
    CheckResult c;
    c.name = "identity/location_risk_ordering";
    c.observed = worst_gap;
    c.expected = 0.0;
    c.tolerance = 1e-15;
    c.passed = ok;
    report.checks.push_back(c);
  }

  // IDS budget identity zeta^2 tr + psi^2 = eps^2.
  {
    double worst = 0.0;
    for (double eps : {0.05, 1.0 / 9.0, 0.2, 1.0}) {
      const auto spec =
          least_favorable_location(ShiftClass::IDS, eps, n, p, tr);
      const auto& ids = std::get<IdsLeastFavorable>(spec);
      worst = std::max(worst, rel_err(ids.zeta * ids.zeta * tr + ids.psi * ids.psi,
                                      eps * eps));
    }
    CheckResult c = rel_check("identity/ids_budget", worst, 0.0, 0.0);
    c.passed = worst <= 1e-12;
    c.tolerance = 1e-12;
    c.detail.clear();
    report.checks.push_back(c);
  }

  // Bayes posterior limits match the closed-form risks.
  {
    const double eps = 0.3;
    const double mj = *location_risk(ShiftClass::JDS, eps, n, p, tr).exact;
    report.checks.push_back(rel_check(
        "identity/bayes_jds_limit",
        bayes_posterior_location_limit(eps, n, p, sigma, ShiftClass::JDS), mj,
        1e-12));
    report.checks.push_back(rel_check(
        "identity/bayes_finite_b",
        bayes_posterior_location(eps, n, p, sigma, 1e6, ShiftClass::JDS),
        bayes_posterior_location_limit(eps, n, p, sigma, ShiftClass::JDS),
        1e-5));
  }

  // Regression Bayes prediction limit matches the exact prediction risk.
  {
    RngStream rng(derive_seed({20240811ull, 0ull}));
    const int rn = 10, rp = 5;
    Mat design(rn, rp);
    for (int i = 0; i < rn; ++i) {
      for (int j = 0; j < rp; ++j) {
        design(i, j) = rng.normal() / std::sqrt(static_cast<double>(rn));
      }
    }
    const Mat noise = Mat::Identity(rn, rn) / 100.0;
    const double eps = 0.2;
    const double exact =
        *lr_risk(eps, design, noise, LrLossKind::Prediction).exact;
    report.checks.push_back(rel_check(
        "identity/bayes_lr_prediction_limit",
        bayes_posterior_lr_limit(eps, design, noise, LrLossKind::Prediction),
        exact, 1e-12));
  }

  // Uniform switching-threshold continuity of the JDS upper bound.
  {
    const int un = 50;
    const double cu = switching_threshold(un);
    const double shift_free = 1.0 / (2.0 * (un + 1.0) * (un + 2.0));
    const double left = sq(cu * std::sqrt(static_cast<double>(un)) +
                           std::sqrt(shift_free));
    const double right = sq(cu + 1.0 / std::sqrt(12.0 * un));
    report.checks.push_back(
        rel_check("identity/uniform_upper_continuity", left, right, 1e-10));
  }

  return report;
}

}  // namespace wshift
