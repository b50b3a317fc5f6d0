#include "amle/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "amle/stats.hpp"

namespace amle {

namespace {

Eigen::MatrixXd continuous_columns(const ParameterSpace& space, const Eigen::MatrixXd& draws) {
  Eigen::MatrixXd out(draws.rows(), space.continuous_dim());
  int j = 0;
  for (int idx : space.continuous_indices()) out.col(j++) = draws.col(idx);
  return out;
}

Eigen::VectorXd select_bandwidth(const KdeOptions& opts, const Eigen::MatrixXd& pts) {
  if (opts.bandwidth == BandwidthSelector::kLscv1d) {
    if (pts.cols() != 1) throw std::invalid_argument("bandwidth: the LSCV selector is univariate only");
    Eigen::VectorXd h(1);
    h[0] = bandwidth_lscv_1d(pts.col(0));
    return h;
  }
  return bandwidth_silverman(pts);
}

ModeResult fit_and_search(const Eigen::MatrixXd& pts, const KdeOptions& kde_opts, int n_threads) {
  const KdeModel kde = make_kde(pts, select_bandwidth(kde_opts, pts));
  ModeSearchOptions opts;
  opts.n_starts = kde_opts.n_starts;
  opts.tol = kde_opts.tol;
  opts.n_threads = n_threads;
  return mode_search(kde, opts);
}

}  // namespace

std::string to_string(ReplicateStatus s) {
  switch (s) {
    case ReplicateStatus::kOk:
      return "ok";
    case ReplicateStatus::kPartialSample:
      return "partial_sample";
    case ReplicateStatus::kDegenerate:
      return "degenerate";
    case ReplicateStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

AmleResult estimate(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                    const AmleConfig& cfg, RngSeed seed) {
  if (space.has_discrete()) {
    throw std::invalid_argument("estimate: space has discrete dims; use estimate_discrete");
  }
  const AbcSample sample = abc_rejection(model, space, observed, cfg.abc, seed);
  const ModeResult mode = fit_and_search(sample.draws, cfg.kde, cfg.abc.n_threads);

  AmleResult out;
  out.theta = mode.location;
  out.density_at_mode = mode.density_value;
  out.acceptance_rate = sample.acceptance_rate;
  out.proposals_used = sample.proposals_used;
  out.posterior_mean = sample.draws.colwise().mean().transpose();
  return out;
}

AmleResult estimate_discrete(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                             const AmleConfig& cfg, RngSeed seed) {
  if (!space.has_discrete()) {
    throw std::invalid_argument("estimate_discrete: space has no discrete dims; use estimate");
  }
  if (space.continuous_dim() < 1) {
    throw std::invalid_argument("estimate_discrete: needs at least one continuous dim");
  }
  const AbcSample sample = abc_rejection(model, space, observed, cfg.abc, seed);
  const Eigen::Index m = sample.draws.rows();

  // partition accepted draws by the discrete value combination
  std::map<std::vector<long>, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < m; ++i) {
    groups[space.discrete_part(sample.draws.row(i).transpose())].push_back(i);
  }

  AmleResult out;
  out.acceptance_rate = sample.acceptance_rate;
  out.proposals_used = sample.proposals_used;
  {
    const Eigen::MatrixXd all_cont = continuous_columns(space, sample.draws);
    out.posterior_mean = all_cont.colwise().mean().transpose();
  }

  const std::vector<long>* best_key = nullptr;
  for (const auto& [key, rows] : groups) {
    if (rows.size() < 2) continue;  // too few draws to smooth
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), space.continuous_dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      pts.row(static_cast<Eigen::Index>(r)) =
          continuous_columns(space, sample.draws.row(rows[r])).row(0);
    }
    DiscreteConditional cond;
    cond.count = static_cast<int>(rows.size());
    try {
      const ModeResult mode = fit_and_search(pts, cfg.kde, cfg.abc.n_threads);
      cond.mode = mode.location;
      cond.kde_max = mode.density_value;
    } catch (const DegenerateSampleError&) {
      continue;  // a conditional sample without spread cannot be scored
    }
    cond.score = (static_cast<double>(cond.count) / static_cast<double>(m)) * cond.kde_max;
    auto [it, inserted] = out.per_discrete_value.emplace(key, std::move(cond));
    if (best_key == nullptr || it->second.score > out.per_discrete_value.at(*best_key).score) {
      best_key = &it->first;
    }
  }
  if (best_key == nullptr) {
    throw EstimationFailureError("estimate_discrete: no discrete value retained at least two draws");
  }

  const DiscreteConditional& best = out.per_discrete_value.at(*best_key);
  out.theta.resize(space.size());
  {
    int cj = 0, dj = 0;
    for (int i = 0; i < space.size(); ++i) {
      if (std::holds_alternative<ContinuousDim>(space.dims()[i])) {
        out.theta[i] = best.mode[cj++];
      } else {
        out.theta[i] = static_cast<double>((*best_key)[static_cast<std::size_t>(dj++)]);
      }
    }
  }
  out.density_at_mode = best.kde_max;
  return out;
}

StudyResult replicate_study(const ModelSpec& model, const ParameterSpace& space, const ObservationSource& source,
                            const AmleConfig& cfg, int replicates, RngSeed seed) {
  if (replicates < 1) throw std::invalid_argument("replicate_study: replicates must be >= 1");
  StudyResult study;
  study.rows.resize(static_cast<std::size_t>(replicates));

  for (int r = 0; r < replicates; ++r) {
    ReplicateRow& row = study.rows[static_cast<std::size_t>(r)];
    row.replicate = r;
    row.seed = seed.child(stream_tag::kReplicate, static_cast<std::uint64_t>(r));
    try {
      SummaryVector observed;
      if (const auto* fixed = std::get_if<SummaryVector>(&source)) {
        observed = *fixed;
      } else {
        const auto& gen = std::get<ObservationGenerator>(source);
        RngStream data_rng(gen.data_seed.child(stream_tag::kGenerator, static_cast<std::uint64_t>(r)));
        const Dataset data = model.simulate(gen.theta_true, data_rng);
        auto summ = model.statistic(data);
        if (!summ) throw EstimationFailureError("replicate_study: observation statistic not computable");
        observed = std::move(*summ);
      }
      row.result = space.has_discrete() ? estimate_discrete(model, space, observed, cfg, row.seed)
                                        : estimate(model, space, observed, cfg, row.seed);
      row.status = ReplicateStatus::kOk;
    } catch (const PartialSampleError& e) {
      row.status = ReplicateStatus::kPartialSample;
      row.message = e.what();
    } catch (const DegenerateSampleError& e) {
      row.status = ReplicateStatus::kDegenerate;
      row.message = e.what();
    } catch (const EstimationFailureError& e) {
      row.status = ReplicateStatus::kFailed;
      row.message = e.what();
    }
  }

  const auto names = space.names();
  std::vector<Eigen::Index> ok_rows;
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    if (study.rows[i].status == ReplicateStatus::kOk) ok_rows.push_back(static_cast<Eigen::Index>(i));
  }
  study.failures = replicates - static_cast<int>(ok_rows.size());
  if (!ok_rows.empty()) {
    for (int p = 0; p < space.size(); ++p) {
      Eigen::VectorXd vals(static_cast<Eigen::Index>(ok_rows.size()));
      for (std::size_t i = 0; i < ok_rows.size(); ++i) {
        vals[static_cast<Eigen::Index>(i)] = study.rows[static_cast<std::size_t>(ok_rows[i])].result.theta[p];
      }
      const FiveNumberSummary f = five_number_summary(vals);
      study.summary.push_back({names[static_cast<std::size_t>(p)], f.min, f.q1, f.median, f.q3, f.max});
    }
  }
  return study;
}

}  // namespace amle
