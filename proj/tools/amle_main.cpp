#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "amle/config.hpp"
#include "amle/runner.hpp"

namespace {

constexpr int kExitConfigError = 2;

amle::ExperimentConfig parse_or_exit(const std::string& path) {
  try {
    return amle::parse_config(path);
  } catch (const amle::ConfigError& e) {
    std::cerr << e.what() << "\n";
    for (const auto& issue : e.issues()) std::cerr << "  - " << issue << "\n";
    std::exit(kExitConfigError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "amle: likelihood-free maximum likelihood estimation.\n"
      "Draws an ABC rejection sample under a uniform instrumental prior, fits a\n"
      "Gaussian kernel density to it and returns the density mode as the\n"
      "approximate MLE. Experiments are described by JSON configs (// comments\n"
      "allowed); identical config + seed reproduce byte-identical artifacts."};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> study_paths;
  std::string plot_out = "plotdata.csv";
  amle::RunOverrides overrides;
  std::uint64_t seed_flag = 0;
  std::string out_dir_flag;
  int threads_flag = 0;
  std::uint64_t max_props_flag = 0;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_flag, "Override the config seed")->expected(1);
    cmd->add_option("--out-dir", out_dir_flag, "Override the output directory")->expected(1);
    cmd->add_option("--threads", threads_flag, "Worker threads (0 = hardware)")->expected(1);
    cmd->add_option("--max-proposals", max_props_flag, "Override the proposal budget")->expected(1);
  };
  auto collect_overrides = [&](const CLI::App* cmd) {
    if (cmd->count("--seed") > 0) overrides.seed = seed_flag;
    if (cmd->count("--out-dir") > 0) overrides.out_dir = out_dir_flag;
    if (cmd->count("--threads") > 0) overrides.threads = threads_flag;
    if (cmd->count("--max-proposals") > 0) overrides.max_proposals = max_props_flag;
  };

  CLI::App* run = app.add_subcommand("run", "Run every (epsilon, replicate) study in a config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run);

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a config, reporting every issue");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  CLI::App* plotdata = app.add_subcommand("plotdata", "Collate study CSVs into boxplot quantiles");
  plotdata->add_option("study", study_paths, "Study CSV file(s)")->required()->expected(-1);
  plotdata->add_option("--out", plot_out, "Output CSV path");

  CLI::App* surface = app.add_subcommand("surface", "Export the simulated likelihood over the config's grid");
  surface->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(surface);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = parse_or_exit(config_path);
      collect_overrides(run);
      return amle::run_experiment(cfg, overrides);
    }
    if (validate->parsed()) {
      const auto cfg = parse_or_exit(config_path);
      std::cout << "config OK: experiment '" << cfg.experiment << "', hash " << cfg.content_hash() << "\n";
      return 0;
    }
    if (plotdata->parsed()) {
      std::vector<std::filesystem::path> paths(study_paths.begin(), study_paths.end());
      return amle::emit_plotdata(paths, plot_out);
    }
    if (surface->parsed()) {
      const auto cfg = parse_or_exit(config_path);
      collect_overrides(surface);
      return amle::export_surface(cfg, overrides);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
