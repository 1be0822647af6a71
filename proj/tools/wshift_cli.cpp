// Experiment driver: parses a JSON manifest and regenerates the risk tables,
// epsilon sweeps, verification reports, and theory-bound tables.
//
// Exit codes: 0 success, 1 check failure, 2 config error, 3 runtime error.

#include <CLI11.hpp>

#include "wshift/config.hpp"
#include "wshift/density.hpp"
#include "wshift/verify.hpp"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  int threads = 0;  // 0: hardware parallelism
  std::optional<std::string> format;
  std::optional<std::string> out;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "experiment manifest (JSON)")
      ->required();
  cmd->add_option("--seed", flags->seed, "override master seed");
  cmd->add_option("--trials", flags->trials, "override Monte Carlo trials");
  cmd->add_option("--threads", flags->threads,
                  "worker pool size (0: hardware parallelism)");
  cmd->add_option("--format", flags->format, "output format: csv|json");
  cmd->add_option("--out", flags->out, "output path (default: stdout)");
}

wshift::ExperimentConfig resolve(const CommonFlags& flags) {
  wshift::ExperimentConfig config = wshift::load_config(flags.config_path);
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.trials) {
    if (*flags.trials < 2) throw wshift::ConfigError("trials", "must be >= 2");
    config.trials = *flags.trials;
  }
  if (flags.format) {
    if (*flags.format == "csv") {
      config.output_format = wshift::OutputFormat::Csv;
    } else if (*flags.format == "json") {
      config.output_format = wshift::OutputFormat::Json;
    } else {
      throw wshift::ConfigError("format", "expected 'csv' or 'json'");
    }
  }
  if (flags.out) config.output_path = *flags.out;
  return config;
}

int thread_count(const CommonFlags& flags) {
  if (flags.threads > 0) return flags.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void emit(const wshift::ExperimentConfig& config, const std::string& body) {
  if (config.output_path.empty()) {
    std::cout << body;
  } else {
    wshift::write_text_file(config.output_path, body);
  }
}

std::vector<double> eps_grid(const wshift::ExperimentConfig& config) {
  if (config.eps_list) return *config.eps_list;
  std::vector<double> grid;
  const double n = static_cast<double>(config.sample_n);
  for (double a : *config.alphas) grid.push_back(std::pow(n, a));
  return grid;
}

int cmd_risk_matrix(const CommonFlags& flags) {
  const wshift::ExperimentConfig config = resolve(flags);
  const std::vector<double> grid = eps_grid(config);
  if (grid.size() != 1) {
    throw wshift::ConfigError("eps_list",
                              "risk-matrix requires exactly one epsilon");
  }
  const wshift::ProblemSetup setup = wshift::to_setup(config);
  const auto perturbations = wshift::perturbation_catalog(setup, grid[0]);
  const auto estimators = wshift::estimator_catalog(setup);
  const wshift::RiskMatrix matrix = wshift::run_matrix(
      setup.dist, setup.sample_n, perturbations, estimators, setup.loss,
      config.trials, config.master_seed, thread_count(flags));
  emit(config, config.output_format == wshift::OutputFormat::Csv
                   ? wshift::risk_matrix_csv(matrix)
                   : wshift::risk_matrix_json(matrix));
  return 0;
}

// Density sweeps bypass the catalog machinery: each epsilon gets a certified
// (base, bump) pair and the KDE risk at the configured sample size.
std::vector<wshift::SweepRow> density_sweep(
    const wshift::ExperimentConfig& config, int /*threads*/) {
  const auto& base = std::get<wshift::HolderBumpDensity>(config.dist);
  const double n = static_cast<double>(config.sample_n);
  std::vector<wshift::SweepRow> rows;
  for (std::size_t ai = 0; ai < config.alphas->size(); ++ai) {
    const double alpha = (*config.alphas)[ai];
    const double eps = std::pow(n, alpha);
    wshift::SweepRow row;
    row.alpha = alpha;
    row.eps = eps;
    row.shift_class = wshift::ShiftClass::IDS;
    row.theory = wshift::density_bounds(eps, n, base.s);
    if (eps > 0.0 && eps <= 1.0) {
      const wshift::DensityShiftPair pair = wshift::build_pair(
          eps, base.s, base.big_l, base.sigma_base, base.x0);
      const auto curve = wshift::kde_risk_curve(
          pair, {static_cast<long>(config.sample_n)}, config.trials,
          wshift::derive_seed({config.master_seed,
                               static_cast<std::uint64_t>(ai)}),
          eps);
      row.minimax_value = curve[0].mean_risk;
      row.std_error = curve[0].std_error;
      row.log_n_risk = std::log(curve[0].mean_risk) / std::log(n);
      row.argmin_estimator = "kde";
      row.argmax_perturbation = "holder_bump";
    } else {
      row.minimax_value = std::numeric_limits<double>::quiet_NaN();
      row.std_error = std::numeric_limits<double>::quiet_NaN();
      row.log_n_risk = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

int cmd_sweep(const CommonFlags& flags) {
  const wshift::ExperimentConfig config = resolve(flags);
  if (!config.alphas) {
    throw wshift::ConfigError("alphas", "sweep requires an alpha grid");
  }
  std::vector<wshift::SweepRow> rows;
  if (config.problem == wshift::ProblemKind::Density) {
    rows = density_sweep(config, thread_count(flags));
  } else {
    rows = wshift::epsilon_sweep(wshift::to_setup(config), *config.alphas,
                                 config.trials, config.master_seed,
                                 thread_count(flags));
  }
  emit(config, config.output_format == wshift::OutputFormat::Csv
                   ? wshift::sweep_csv(rows)
                   : wshift::sweep_json(rows));
  return 0;
}

int cmd_verify(const CommonFlags& flags) {
  const wshift::ExperimentConfig config = resolve(flags);
  wshift::VerifyOptions options;
  options.threads = thread_count(flags);
  const wshift::VerifyReport report = wshift::run_verify(config, options);
  std::cout << report.render();
  if (!report.all_passed()) {
    const std::string failures = report.failures_json();
    if (!config.output_path.empty()) {
      wshift::write_text_file(config.output_path, failures);
    } else {
      std::cerr << failures;
    }
    return 1;
  }
  if (!config.output_path.empty()) {
    wshift::write_text_file(config.output_path, "[]\n");
  }
  return 0;
}

int cmd_bounds(const CommonFlags& flags) {
  const wshift::ExperimentConfig config = resolve(flags);
  const wshift::ProblemSetup setup = wshift::to_setup(config);
  std::vector<wshift::TheoryBound> rows;
  for (double eps : eps_grid(config)) {
    for (wshift::ShiftClass cls : config.shift_classes) {
      rows.push_back(wshift::theory_for(setup, cls, eps));
    }
  }
  emit(config, config.output_format == wshift::OutputFormat::Csv
                   ? wshift::bounds_csv(rows)
                   : wshift::bounds_json(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax risk experiments under Wasserstein distribution shift"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* risk_matrix = app.add_subcommand(
      "risk-matrix", "estimator x perturbation Monte Carlo risk table");
  CLI::App* sweep =
      app.add_subcommand("sweep", "minimax risk across an epsilon grid");
  CLI::App* verify =
      app.add_subcommand("verify", "empirical-vs-theory check suite");
  CLI::App* bounds =
      app.add_subcommand("bounds", "theory-only bound table (no sampling)");
  for (CLI::App* cmd : {risk_matrix, sweep, verify, bounds}) {
    add_common_flags(cmd, &flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (risk_matrix->parsed()) return cmd_risk_matrix(flags);
    if (sweep->parsed()) return cmd_sweep(flags);
    if (verify->parsed()) return cmd_verify(flags);
    if (bounds->parsed()) return cmd_bounds(flags);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const wshift::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
