#include "wshift/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wshift {

using nlohmann::json;

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Mat mat_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field, "expected a nonempty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(field, "rows must be nonempty arrays");
  Mat m(static_cast<long>(j.size()), static_cast<long>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ConfigError(field, "ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw ConfigError(field, "non-numeric entry");
      m(static_cast<long>(i), static_cast<long>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

Vec vec_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field, "expected a nonempty numeric array");
  }
  Vec v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(field, "non-numeric entry");
    v(static_cast<long>(i)) = j[i].get<double>();
  }
  return v;
}

double num_or(const json& j, const char* key, double fallback,
              const std::string& field) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(field, "expected a number");
  return j[key].get<double>();
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "location") return ProblemKind::Location;
  if (s == "linear_regression") return ProblemKind::LinearRegression;
  if (s == "uniform") return ProblemKind::Uniform;
  if (s == "density") return ProblemKind::Density;
  throw ConfigError("problem", "unknown problem '" + s + "'");
}

ShiftClass parse_shift_class(const std::string& s) {
  if (s == "CDS") return ShiftClass::CDS;
  if (s == "IDS") return ShiftClass::IDS;
  if (s == "JDS") return ShiftClass::JDS;
  throw ConfigError("shift_classes", "unknown shift class '" + s + "'");
}

DistributionSpec parse_dist(const json& j, ProblemKind problem) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("dist.kind", "expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "gaussian_location") {
    GaussianLocation g;
    if (!j.contains("sigma_cov")) {
      throw ConfigError("dist.sigma_cov", "required for gaussian_location");
    }
    g.sigma_cov = mat_from_json(j["sigma_cov"], "dist.sigma_cov");
    if (j.contains("theta")) {
      g.theta = vec_from_json(j["theta"], "dist.theta");
    } else {
      g.theta = Vec::Zero(g.sigma_cov.rows());
    }
    return g;
  }
  if (kind == "uniform_location") {
    UniformLocation u;
    u.theta = num_or(j, "theta", 3.0, "dist.theta");
    return u;
  }
  if (kind == "smoothed_uniform") {
    SmoothedUniform su;
    su.theta = num_or(j, "theta", 3.0, "dist.theta");
    su.tau = num_or(j, "tau", 0.25, "dist.tau");
    return su;
  }
  if (kind == "holder_bump") {
    HolderBumpDensity d;
    d.x0 = num_or(j, "x0", 0.0, "dist.x0");
    d.s = num_or(j, "s", 2.0, "dist.s");
    d.big_l = num_or(j, "L", 3.0, "dist.L");
    d.sigma_base = num_or(j, "sigma_base", 2.0, "dist.sigma_base");
    d.h = num_or(j, "h", 0.5, "dist.h");
    d.sign = static_cast<int>(num_or(j, "sign", 0.0, "dist.sign"));
    return d;
  }
  if (kind == "linear_model") {
    LinearModel m;
    if (!j.contains("design")) {
      throw ConfigError("dist.design", "required for linear_model");
    }
    m.design = mat_from_json(j["design"], "dist.design");
    if (j.contains("theta")) {
      m.theta = vec_from_json(j["theta"], "dist.theta");
    } else {
      m.theta = Vec::Ones(m.design.cols());
    }
    if (j.contains("noise_cov")) {
      m.noise_cov = mat_from_json(j["noise_cov"], "dist.noise_cov");
    } else {
      m.noise_cov = Mat::Identity(m.design.rows(), m.design.rows());
    }
    return m;
  }
  (void)problem;
  throw ConfigError("dist.kind", "unknown distribution kind '" + kind + "'");
}

json dist_to_json(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        json j;
        if constexpr (std::is_same_v<T, GaussianLocation>) {
          j["kind"] = "gaussian_location";
          j["theta"] = vec_to_json(d.theta);
          j["sigma_cov"] = mat_to_json(d.sigma_cov);
        } else if constexpr (std::is_same_v<T, UniformLocation>) {
          j["kind"] = "uniform_location";
          j["theta"] = d.theta;
        } else if constexpr (std::is_same_v<T, SmoothedUniform>) {
          j["kind"] = "smoothed_uniform";
          j["theta"] = d.theta;
          j["tau"] = d.tau;
        } else if constexpr (std::is_same_v<T, HolderBumpDensity>) {
          j["kind"] = "holder_bump";
          j["x0"] = d.x0;
          j["s"] = d.s;
          j["L"] = d.big_l;
          j["sigma_base"] = d.sigma_base;
          j["h"] = d.h;
          j["sign"] = d.sign;
        } else {  // LinearModel
          j["kind"] = "linear_model";
          j["design"] = mat_to_json(d.design);
          j["theta"] = vec_to_json(d.theta);
          j["noise_cov"] = mat_to_json(d.noise_cov);
        }
        return j;
      },
      dist);
}

LossSpec parse_loss(const json& j, const DistributionSpec& dist,
                    ProblemKind problem) {
  if (j.is_null()) {
    // Problem-appropriate default.
    switch (problem) {
      case ProblemKind::LinearRegression: {
        const auto& m = std::get<LinearModel>(dist);
        return PredictionError{m.design};
      }
      case ProblemKind::Density: {
        const auto& d = std::get<HolderBumpDensity>(dist);
        return PointwiseSquared{d.x0, pdf(dist, d.x0)};
      }
      default:
        return SquaredError{};
    }
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("loss.kind", "expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "squared_error") return SquaredError{};
  if (kind == "prediction_error") {
    if (j.contains("design")) {
      return PredictionError{mat_from_json(j["design"], "loss.design")};
    }
    if (const auto* m = std::get_if<LinearModel>(&dist)) {
      return PredictionError{m->design};
    }
    throw ConfigError("loss.design", "required outside linear_model configs");
  }
  if (kind == "pointwise_squared") {
    PointwiseSquared ps;
    ps.x0 = num_or(j, "x0", 0.0, "loss.x0");
    ps.true_value = j.contains("true_value")
                        ? num_or(j, "true_value", 0.0, "loss.true_value")
                        : pdf(dist, ps.x0);
    return ps;
  }
  throw ConfigError("loss.kind", "unknown loss kind '" + kind + "'");
}

json loss_to_json(const LossSpec& loss) {
  return std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        json j;
        if constexpr (std::is_same_v<T, SquaredError>) {
          j["kind"] = "squared_error";
        } else if constexpr (std::is_same_v<T, PredictionError>) {
          j["kind"] = "prediction_error";
          j["design"] = mat_to_json(l.design);
        } else {
          j["kind"] = "pointwise_squared";
          j["x0"] = l.x0;
          j["true_value"] = l.true_value;
        }
        return j;
      },
      loss);
}

bool dist_matches_problem(const DistributionSpec& dist, ProblemKind problem) {
  switch (problem) {
    case ProblemKind::Location:
      return std::holds_alternative<GaussianLocation>(dist);
    case ProblemKind::LinearRegression:
      return std::holds_alternative<LinearModel>(dist);
    case ProblemKind::Uniform:
      return std::holds_alternative<UniformLocation>(dist);
    case ProblemKind::Density:
      return std::holds_alternative<HolderBumpDensity>(dist);
  }
  return false;
}

std::optional<double> opt_field(const json& row, const char* key) {
  if (!row.contains(key) || row[key].is_null()) return std::nullopt;
  return row[key].get<double>();
}

json bound_to_json(const TheoryBound& b) {
  json j;
  j["problem"] = b.problem;
  j["shift_class"] = to_string(b.shift_class);
  j["eps"] = b.eps;
  j["lower"] = b.lower ? json(*b.lower) : json();
  j["upper"] = b.upper ? json(*b.upper) : json();
  j["exact"] = b.exact ? json(*b.exact) : json();
  j["rate_only"] = b.rate_only;
  return j;
}

std::string opt_csv(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::vector<double> default_alpha_grid() {
  std::vector<double> alphas;
  for (int i = 0; i < 13; ++i) alphas.push_back(-2.5 + 0.25 * i);
  return alphas;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "expected a JSON object");

  ExperimentConfig c;
  if (!j.contains("problem") || !j["problem"].is_string()) {
    throw ConfigError("problem", "required string field");
  }
  c.problem = parse_problem(j["problem"].get<std::string>());
  if (!j.contains("dist")) throw ConfigError("dist", "required field");
  c.dist = parse_dist(j["dist"], c.problem);
  if (!dist_matches_problem(c.dist, c.problem)) {
    throw ConfigError("dist", "distribution kind inconsistent with problem");
  }
  try {
    validate(c.dist);
  } catch (const std::exception& e) {
    throw ConfigError("dist", e.what());
  }

  c.sample_n = static_cast<int>(num_or(j, "sample_n", 10.0, "sample_n"));
  if (c.sample_n < 1) throw ConfigError("sample_n", "must be >= 1");
  if (const auto* m = std::get_if<LinearModel>(&c.dist)) {
    c.sample_n = static_cast<int>(m->design.rows());
  }

  if (j.contains("shift_classes")) {
    if (!j["shift_classes"].is_array()) {
      throw ConfigError("shift_classes", "expected an array of class names");
    }
    for (const auto& s : j["shift_classes"]) {
      if (!s.is_string()) throw ConfigError("shift_classes", "expected strings");
      c.shift_classes.push_back(parse_shift_class(s.get<std::string>()));
    }
  } else {
    c.shift_classes = {ShiftClass::CDS, ShiftClass::IDS, ShiftClass::JDS};
  }
  if (c.shift_classes.empty()) {
    throw ConfigError("shift_classes", "must name at least one class");
  }

  const bool has_alphas = j.contains("alphas") && !j["alphas"].is_null();
  const bool has_eps = j.contains("eps_list") && !j["eps_list"].is_null();
  if (has_alphas == has_eps) {
    throw ConfigError("alphas",
                      "exactly one of 'alphas' and 'eps_list' must be present");
  }
  const auto read_grid = [](const json& arr, const char* field) {
    if (!arr.is_array()) throw ConfigError(field, "expected a numeric array");
    std::vector<double> grid;
    for (const auto& v : arr) {
      if (!v.is_number()) throw ConfigError(field, "non-numeric entry");
      grid.push_back(v.get<double>());
    }
    return grid;
  };
  if (has_alphas) c.alphas = read_grid(j["alphas"], "alphas");
  if (has_eps) {
    c.eps_list = read_grid(j["eps_list"], "eps_list");
    for (double e : *c.eps_list) {
      if (e < 0.0) throw ConfigError("eps_list", "eps must be >= 0");
    }
  }

  c.trials = static_cast<long>(num_or(j, "trials", 5000.0, "trials"));
  if (c.trials < 2) throw ConfigError("trials", "must be >= 2");
  c.master_seed =
      static_cast<std::uint64_t>(num_or(j, "master_seed", 0.0, "master_seed"));
  c.loss = parse_loss(j.contains("loss") ? j["loss"] : json(), c.dist, c.problem);
  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) {
      throw ConfigError("output_path", "expected a string");
    }
    c.output_path = j["output_path"].get<std::string>();
  }
  if (j.contains("output_format")) {
    const std::string f = j["output_format"].get<std::string>();
    if (f == "csv") {
      c.output_format = OutputFormat::Csv;
    } else if (f == "json") {
      c.output_format = OutputFormat::Json;
    } else {
      throw ConfigError("output_format", "expected 'csv' or 'json'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["problem"] = to_string(c.problem);
  j["dist"] = dist_to_json(c.dist);
  j["sample_n"] = c.sample_n;
  json classes = json::array();
  for (ShiftClass cls : c.shift_classes) classes.push_back(to_string(cls));
  j["shift_classes"] = classes;
  if (c.alphas) j["alphas"] = *c.alphas;
  if (c.eps_list) j["eps_list"] = *c.eps_list;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["loss"] = loss_to_json(c.loss);
  if (!c.output_path.empty()) j["output_path"] = c.output_path;
  j["output_format"] = c.output_format == OutputFormat::Csv ? "csv" : "json";
  return j.dump(2) + "\n";
}

ProblemSetup to_setup(const ExperimentConfig& c) {
  ProblemSetup s;
  s.problem = c.problem;
  s.dist = c.dist;
  s.sample_n = c.sample_n;
  s.shift_classes = c.shift_classes;
  s.loss = c.loss;
  return s;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string risk_matrix_csv(const RiskMatrix& m) {
  std::ostringstream out;
  out << "estimator,perturbation,mean,std_error,trials,seed\n";
  for (std::size_t i = 0; i < m.estimator_labels.size(); ++i) {
    for (std::size_t j = 0; j < m.perturbation_labels.size(); ++j) {
      out << m.estimator_labels[i] << ',' << m.perturbation_labels[j] << ','
          << format_double(m.mean_loss(static_cast<long>(i), static_cast<long>(j)))
          << ','
          << format_double(m.std_error(static_cast<long>(i), static_cast<long>(j)))
          << ',' << m.trials << ',' << m.master_seed << '\n';
    }
  }
  return out.str();
}

std::string risk_matrix_json(const RiskMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.estimator_labels.size(); ++i) {
    for (std::size_t j = 0; j < m.perturbation_labels.size(); ++j) {
      json row;
      row["estimator"] = m.estimator_labels[i];
      row["perturbation"] = m.perturbation_labels[j];
      row["mean"] = m.mean_loss(static_cast<long>(i), static_cast<long>(j));
      row["std_error"] = m.std_error(static_cast<long>(i), static_cast<long>(j));
      row["trials"] = m.trials;
      row["seed"] = m.master_seed;
      rows.push_back(row);
    }
  }
  return rows.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "alpha,eps,shift_class,minimax_empirical,std_error,log_n_risk,"
         "argmin_estimator,argmax_perturbation,theory_exact,theory_lower,"
         "theory_upper,rate_only\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.eps) << ','
        << to_string(r.shift_class) << ',' << format_double(r.minimax_value)
        << ',' << format_double(r.std_error) << ','
        << format_double(r.log_n_risk) << ',' << r.argmin_estimator << ','
        << r.argmax_perturbation << ',' << opt_csv(r.theory.exact) << ','
        << opt_csv(r.theory.lower) << ',' << opt_csv(r.theory.upper) << ','
        << (r.theory.rate_only ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["alpha"] = r.alpha;
    row["eps"] = r.eps;
    row["shift_class"] = to_string(r.shift_class);
    row["minimax_empirical"] = r.minimax_value;
    row["std_error"] = r.std_error;
    row["log_n_risk"] = r.log_n_risk;
    row["argmin_estimator"] = r.argmin_estimator;
    row["argmax_perturbation"] = r.argmax_perturbation;
    row["theory"] = bound_to_json(r.theory);
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string bounds_csv(const std::vector<TheoryBound>& rows) {
  std::ostringstream out;
  out << "problem,shift_class,eps,lower,upper,exact,rate_only\n";
  for (const auto& b : rows) {
    out << b.problem << ',' << to_string(b.shift_class) << ','
        << format_double(b.eps) << ',' << opt_csv(b.lower) << ','
        << opt_csv(b.upper) << ',' << opt_csv(b.exact) << ','
        << (b.rate_only ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string bounds_json(const std::vector<TheoryBound>& rows) {
  json arr = json::array();
  for (const auto& b : rows) arr.push_back(bound_to_json(b));
  return arr.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace wshift
