#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "amle/errors.hpp"
#include "amle/models.hpp"
#include "amle/types.hpp"

namespace amle {

/// One axis of a rectangular evaluation grid.
struct GridAxis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  int count = 0;
};

/// A fully validated experiment description, as parsed from a JSON config
/// (// comments allowed). Relative paths are resolved against the config
/// file's directory.
struct ExperimentConfig {
  std::string experiment;
  std::string model_name;  // binomial | normal | stable | superposed_gamma | locscale_quantile

  // model shape
  int n = 0;
  int size = 10;                 // binomial trials
  double t0 = 0.0;               // superposed gamma horizon
  bool include_skewness = true;  // 9th superposed statistic
  Eigen::VectorXd ecf_grid;      // stable
  double beta_fixed = 0.0;       // stable skewness parameter
  double q1 = 0.25, q2 = 0.75;   // locscale quantiles
  bool map_g_inverse = true;

  // data source (exactly one)
  std::filesystem::path data_path;
  std::filesystem::path prices_path;
  bool has_generator = false;
  Eigen::VectorXd generator_theta;
  std::uint64_t generator_seed = 0;

  std::vector<Dim> prior;

  // estimation
  std::vector<double> epsilons;
  int m = 10000;
  int replicates = 1;
  std::string study_mode = "fixed";  // fixed | fresh
  std::string distance = "euclidean";  // euclidean | pilot | weighted
  std::vector<double> distance_scale;  // weighted only
  std::string kernel = "indicator";    // indicator | truncated_gaussian
  std::string bandwidth = "silverman";  // silverman | lscv
  int n_starts = 50;
  std::uint64_t max_proposals = 10'000'000;
  std::uint64_t seed = 0;
  int threads = 0;
  bool save_abc_samples = false;

  // optional likelihood-surface export
  bool has_surface = false;
  double surface_epsilon = 0.0;
  int surface_n_sims = 0;
  std::vector<GridAxis> surface_grid;

  std::filesystem::path output_dir = "out";
  std::filesystem::path base_dir;  // directory of the config file

  /// Canonical content hash covering everything that affects outputs.
  [[nodiscard]] std::string content_hash() const;
};

/// Parse and validate; throws ConfigError carrying every issue found.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Instantiate the model named by the config.
ModelSpec build_model(const ExperimentConfig& cfg);

/// Prior box/product set from the config.
ParameterSpace build_space(const ExperimentConfig& cfg);

/// Observed summary: loads the dataset (or generates it with the configured
/// true parameter and seed) and applies the model statistic.
SummaryVector load_observed(const ExperimentConfig& cfg, const ModelSpec& model);

}  // namespace amle
