// Experiment configs, validation, and the artifact-writing runner behind
// the rfjlab command line tool.
//
// A config is a JSON object. run() writes three files next to output_path:
//   <output_path>.csv          per-n / per-h rows, 17 significant digits
//   <output_path>.summary.txt  PASS / FAIL / INFO line per property
//   <output_path>.config.json  the resolved config, itself a valid config

#ifndef RFJ_EXPERIMENT_HPP
#define RFJ_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rfj/convergence_diag.hpp"

namespace rfj {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExperimentKind { expand, orthonormality, sample_paths, isometry, tail, qm, rate, continuity };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::tail;
  std::string function_id = "abs_pow_3_2";
  BasisKind basis = BasisKind::orthonormal_p;
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  ProcessKind process = ProcessKind::stable;
  double alpha = 2.0;
  std::vector<int> n_values{4, 8, 16, 32};
  double epsilon = 0.1;
  double eps_prime = 0.09;
  int replicas = 2000;
  int grid_M = 4096;
  int N_ref = 128;
  std::uint64_t seed = 1;
  double y = 0.5;
  double y_center = 0.5;
  std::vector<double> h_values{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  ContinuityMode mode = ContinuityMode::quadratic_mean;
  double tail_threshold = 0.05;
  double slope_max = 0.05;
  double continuity_ratio = 1e-3;
  double tolerance = 1e-10;
  int quadrature_nodes = 0;
  std::string output_path;
};

struct ValidationResult {
  ExperimentConfig config;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

/// Field-level checks, aggregated. Missing keys get experiment-dependent
/// defaults, which the resolved config records.
ValidationResult validate(const nlohmann::json& raw);

/// Reads and validates a config file; read and parse failures are reported
/// as errors.
ValidationResult validate_file(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

enum class PropertyStatus { pass, fail, info };

struct PropertyResult {
  std::string name;
  PropertyStatus status;
  std::string detail;
};

struct ExperimentResult {
  std::string csv;
  std::vector<PropertyResult> properties;

  bool passed() const;
  std::string summary(const ExperimentConfig& config) const;
};

/// threads == 0 uses default_thread_count(). Results do not depend on it.
ExperimentResult execute(const ExperimentConfig& config, int threads = 0);

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_config = 2, exit_numeric = 3, exit_property = 4 };

/// validate_file + execute + artifact writing, with diagnostics on `log`.
/// Nothing is written unless the config validates and the run completes.
int run_config_file(const std::filesystem::path& path, std::ostream& log, int threads = 0);

/// Lines "id  class  description" for every catalog entry.
std::string catalog_listing();

}  // namespace rfj

#endif  // RFJ_EXPERIMENT_HPP
