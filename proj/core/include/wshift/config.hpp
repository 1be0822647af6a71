#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wshift/risk_engine.hpp"

namespace wshift {

// Invalid or inconsistent experiment manifest; `field` names the offending
// entry by path (e.g. "dist.sigma_cov").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Location;
  DistributionSpec dist;
  int sample_n = 10;
  std::vector<ShiftClass> shift_classes;
  std::optional<std::vector<double>> alphas;    // eps = n^alpha
  std::optional<std::vector<double>> eps_list;  // explicit grid
  long trials = 5000;
  std::uint64_t master_seed = 0;
  LossSpec loss;
  std::string output_path;
  OutputFormat output_format = OutputFormat::Csv;
};

// Default alpha grid covering every regime transition: [-2.5, 0.5], 13 steps.
std::vector<double> default_alpha_grid();

// Parse / serialize a JSON manifest.  Discriminated unions use a "kind"
// field.  Throws ConfigError with a field path on any violation.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// ProblemSetup view of a config (drops the I/O fields).
ProblemSetup to_setup(const ExperimentConfig& config);

// 17-significant-digit numeric formatting (round-trip exact for doubles).
std::string format_double(double x);

// CSV/JSON report bodies; columns fixed per command.
std::string risk_matrix_csv(const RiskMatrix& matrix);
std::string risk_matrix_json(const RiskMatrix& matrix);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);
std::string bounds_csv(const std::vector<TheoryBound>& rows);
std::string bounds_json(const std::vector<TheoryBound>& rows);

void write_text_file(const std::string& path, const std::string& body);

}  // namespace wshift
