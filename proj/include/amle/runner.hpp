#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "amle/config.hpp"

namespace amle {

/// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> max_proposals;
};

/// Full experiment: per-epsilon replicate studies, CSV/JSON artifacts, and a
/// hashed manifest. Identical config + seed produce byte-identical artifacts.
/// Returns 0 on success, 3 when estimation failed everywhere (partial
/// outputs are still flushed, with the manifest marked incomplete).
int run_experiment(const ExperimentConfig& cfg, const RunOverrides& overrides = {});

/// Likelihood-surface export over the config's surface grid (acceptance-
/// fraction estimates of the smoothed likelihood). Returns 0 or 3.
int export_surface(const ExperimentConfig& cfg, const RunOverrides& overrides = {});

/// Boxplot-ready quantile table from one or more study CSVs. Returns 0,
/// throws on malformed input.
int emit_plotdata(const std::vector<std::filesystem::path>& study_csvs, const std::filesystem::path& out);

}  // namespace amle
