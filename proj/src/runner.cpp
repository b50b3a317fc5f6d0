#include "amle/runner.hpp"

#include <algorithm>
#include <iostream>

#include "amle/abc.hpp"
#include "amle/estimate.hpp"
#include "amle/io.hpp"

namespace amle {

namespace {

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOverrides& ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out_dir) cfg.output_dir = *ov.out_dir;
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.max_proposals) cfg.max_proposals = *ov.max_proposals;
  return cfg;
}

std::string eps_token(double eps) {
  std::string s = io::format_double(eps);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

DistanceSpec config_distance(const ExperimentConfig& cfg) {
  if (cfg.distance == "pilot") return DistanceSpec::pilot_mad();
  if (cfg.distance == "weighted") {
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(cfg.distance_scale.data(),
                                                          static_cast<Eigen::Index>(cfg.distance_scale.size()));
    return DistanceSpec::weighted(s);
  }
  return DistanceSpec::euclidean();
}

AmleConfig base_amle_config(const ExperimentConfig& cfg) {
  AmleConfig a;
  a.abc.m_target = cfg.m;
  a.abc.max_proposals = cfg.max_proposals;
  a.abc.kernel =
      cfg.kernel == "truncated_gaussian" ? KernelSpec::Kind::kTruncatedGaussian : KernelSpec::Kind::kIndicator;
  a.abc.n_threads = cfg.threads;
  a.kde.bandwidth = cfg.bandwidth == "lscv" ? BandwidthSelector::kLscv1d : BandwidthSelector::kSilverman;
  a.kde.n_starts = cfg.n_starts;
  return a;
}

Eigen::MatrixXd product_grid(const std::vector<GridAxis>& axes) {
  Eigen::Index total = 1;
  for (const auto& a : axes) total *= a.count;
  Eigen::MatrixXd grid(total, static_cast<Eigen::Index>(axes.size()));
  for (Eigen::Index row = 0; row < total; ++row) {
    Eigen::Index rem = row;
    // last axis varies fastest
    for (int ax = static_cast<int>(axes.size()) - 1; ax >= 0; --ax) {
      const auto& a = axes[static_cast<std::size_t>(ax)];
      const Eigen::Index i = rem % a.count;
      rem /= a.count;
      const double v =
          a.count == 1 ? a.from : a.from + (a.to - a.from) * static_cast<double>(i) / static_cast<double>(a.count - 1);
      grid(row, ax) = v;
    }
  }
  return grid;
}

}  // namespace

int run_experiment(const ExperimentConfig& raw_cfg, const RunOverrides& overrides) {
  const ExperimentConfig cfg = apply_overrides(raw_cfg, overrides);
  const ModelSpec model = build_model(cfg);
  const ParameterSpace space = build_space(cfg);
  const std::string hash = cfg.content_hash();
  const std::filesystem::path dir = cfg.output_dir / cfg.experiment;
  std::filesystem::create_directories(dir);

  std::vector<std::filesystem::path> artifacts;
  bool any_success = false;
  bool any_rows = false;

  try {
    // one metric resolution shared by every replicate and epsilon
    const DistanceSpec dist = resolve_distance(config_distance(cfg), model, space, RngSeed{cfg.seed, 0});

    ObservationSource source = SummaryVector{};
    if (cfg.study_mode == "fresh") {
      source = ObservationGenerator{cfg.generator_theta, RngSeed{cfg.generator_seed, 0}};
    } else {
      source = load_observed(cfg, model);
    }

    AmleConfig acfg = base_amle_config(cfg);
    acfg.abc.distance = dist;

    for (double eps : cfg.epsilons) {
      acfg.abc.epsilon = eps;
      const StudyResult study =
          replicate_study(model, space, source, acfg, cfg.replicates, RngSeed{cfg.seed, 0});
      any_rows = true;
      for (const auto& row : study.rows) any_success = any_success || row.status == ReplicateStatus::kOk;

      const std::string tag = "eps" + eps_token(eps) + "_m" + std::to_string(cfg.m);
      const auto study_path = dir / ("study_" + tag + ".csv");
      const auto summary_path = dir / ("summary_" + tag + ".json");
      io::write_study_csv(study, space, hash, eps, cfg.m, study_path);
      io::write_summary_json(study, cfg.experiment, hash, eps, cfg.m, summary_path);
      artifacts.push_back(study_path);
      artifacts.push_back(summary_path);

      if (cfg.save_abc_samples && cfg.study_mode == "fixed") {
        try {
          const AbcSample sample = abc_rejection(model, space, std::get<SummaryVector>(source), acfg.abc,
                                                 RngSeed{cfg.seed, 0}.child(stream_tag::kReplicate, 0));
          const auto sample_path = dir / ("abc_sample_" + tag + ".csv");
          const auto meta_path = dir / ("abc_sample_" + tag + ".meta");
          io::write_abc_sample(sample, space, sample_path, meta_path);
          artifacts.push_back(sample_path);
          artifacts.push_back(meta_path);
        } catch (const PartialSampleError&) {
          // study rows already record the budget exhaustion for this epsilon
        }
      }
    }

    // optional KDE surface over the configured grid, from the first replicate
    // at the smallest epsilon
    if (cfg.has_surface && cfg.study_mode == "fixed" && space.continuous_dim() > 0 &&
        static_cast<int>(cfg.surface_grid.size()) == space.continuous_dim()) {
      const double eps = *std::min_element(cfg.epsilons.begin(), cfg.epsilons.end());
      acfg.abc.epsilon = eps;
      try {
        const AbcSample sample = abc_rejection(model, space, std::get<SummaryVector>(source), acfg.abc,
                                               RngSeed{cfg.seed, 0}.child(stream_tag::kReplicate, 0));
        Eigen::MatrixXd pts(sample.draws.rows(), space.continuous_dim());
        int cj = 0;
        for (int idx : space.continuous_indices()) pts.col(cj++) = sample.draws.col(idx);
        const KdeModel kde = make_kde(pts, bandwidth_silverman(pts));
        std::vector<std::string> names;
        for (const auto& a : cfg.surface_grid) names.push_back(a.name);
        const auto surf_path = dir / "kde_surface.csv";
        io::write_kde_surface_csv(kde, product_grid(cfg.surface_grid), names, surf_path, cfg.threads);
        artifacts.push_back(surf_path);
      } catch (const PartialSampleError&) {
      } catch (const DegenerateSampleError&) {
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "run_experiment: " << e.what() << "\n";
    io::write_manifest(dir, artifacts, hash, /*complete=*/false);
    return 3;
  }

  const bool complete = any_rows && any_success;
  io::write_manifest(dir, artifacts, hash, complete);
  if (!complete) {
    std::cerr << "run_experiment: no replicate produced an estimate\n";
    return 3;
  }
  return 0;
}

int export_surface(const ExperimentConfig& raw_cfg, const RunOverrides& overrides) {
  const ExperimentConfig cfg = apply_overrides(raw_cfg, overrides);
  if (!cfg.has_surface) {
    std::cerr << "surface: config has no surface section\n";
    return 3;
  }
  const ModelSpec model = build_model(cfg);
  const ParameterSpace space = build_space(cfg);
  if (static_cast<int>(cfg.surface_grid.size()) != space.size()) {
    std::cerr << "surface: grid must have one axis per parameter dim\n";
    return 3;
  }
  const std::filesystem::path dir = cfg.output_dir / cfg.experiment;
  std::filesystem::create_directories(dir);
  try {
    const SummaryVector observed = load_observed(cfg, model);
    const DistanceSpec dist = resolve_distance(config_distance(cfg), model, space, RngSeed{cfg.seed, 0});
    const Eigen::MatrixXd grid = product_grid(cfg.surface_grid);
    std::vector<ParameterVector> points;
    points.reserve(static_cast<std::size_t>(grid.rows()));
    for (Eigen::Index i = 0; i < grid.rows(); ++i) points.push_back(grid.row(i).transpose());
    const auto curve = likelihood_curve(model, points, observed, cfg.surface_epsilon, cfg.surface_n_sims,
                                        RngSeed{cfg.seed, 0}, dist,
                                        cfg.kernel == "truncated_gaussian" ? KernelSpec::Kind::kTruncatedGaussian
                                                                           : KernelSpec::Kind::kIndicator,
                                        cfg.threads);
    std::vector<std::string> names;
    for (const auto& a : cfg.surface_grid) names.push_back(a.name);
    io::write_likelihood_curve_csv(curve, names, dir / "likelihood_surface.csv");
  } catch (const std::exception& e) {
    std::cerr << "surface: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int emit_plotdata(const std::vector<std::filesystem::path>& study_csvs, const std::filesystem::path& out) {
  io::write_plotdata_csv(study_csvs, out);
  return 0;
}

}  // namespace amle
