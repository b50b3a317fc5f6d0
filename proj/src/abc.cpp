#include "amle/abc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "amle/stats.hpp"
#include "parallel.hpp"

namespace amle {

namespace {

void validate_config(const AbcConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("AbcConfig: epsilon must be positive");
  if (cfg.m_target < 1) throw std::invalid_argument("AbcConfig: m_target must be >= 1");
  if (cfg.max_proposals < static_cast<std::uint64_t>(cfg.m_target)) {
    throw std::invalid_argument("AbcConfig: max_proposals must be >= m_target");
  }
}

}  // namespace

Eigen::VectorXd pilot_mad_scale(const ModelSpec& model, const ParameterSpace& space, int n_pilot, RngSeed seed) {
  if (n_pilot < 2) throw std::invalid_argument("pilot_mad_scale: n_pilot must be >= 2");
  const int m = model.statistic_dim;
  Eigen::MatrixXd pilot(n_pilot, m);
  int got = 0;
  const std::uint64_t cap = 50ull * static_cast<std::uint64_t>(n_pilot);
  for (std::uint64_t i = 0; i < cap && got < n_pilot; ++i) {
    RngStream rng(seed.child(stream_tag::kPilot, i));
    const ParameterVector theta = uniform_prior_draw(space, rng);
    const auto summ = model.summary_from(theta, rng);
    if (!summ) continue;
    if (summ->components.size() != m) throw std::logic_error("pilot_mad_scale: statistic dimension mismatch");
    pilot.row(got++) = summ->components.transpose();
  }
  if (got < n_pilot) throw std::runtime_error("pilot_mad_scale: too many invalid pilot simulations");
  Eigen::VectorXd scale(m);
  for (int j = 0; j < m; ++j) {
    double s = mad(pilot.col(j));
    if (!(s > 0.0)) s = sample_sd(pilot.col(j));
    if (!(s > 0.0)) s = 1.0;
    scale[j] = s;
  }
  return scale;
}

DistanceSpec resolve_distance(const DistanceSpec& spec, const ModelSpec& model, const ParameterSpace& space,
                              RngSeed seed) {
  if (spec.kind != DistanceSpec::Kind::kPilotMad) return spec;
  return DistanceSpec::weighted(pilot_mad_scale(model, space, 1000, seed));
}

AbcSample abc_rejection(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                        const AbcConfig& cfg, RngSeed seed) {
  validate_config(cfg);
  if (observed.components.size() != model.statistic_dim) {
    throw std::invalid_argument("abc_rejection: observed summary dimension does not match the model statistic");
  }
  const DistanceSpec dist = resolve_distance(cfg.distance, model, space, seed);
  const KernelSpec kernel{cfg.kernel, cfg.epsilon};
  const bool indicator = cfg.kernel == KernelSpec::Kind::kIndicator;
  const bool use_fast = static_cast<bool>(model.fast_distance) && indicator;
  const int dim = space.size();
  const int threads = detail::resolve_threads(cfg.n_threads);

  AbcSample out;
  out.epsilon = cfg.epsilon;
  out.seed = seed;
  if (dist.kind == DistanceSpec::Kind::kWeightedEuclidean) out.resolved_scale = dist.scale;

  std::vector<double> acc_theta;  // accepted draws, row-major
  std::vector<double> acc_dist;
  std::vector<std::uint64_t> acc_index;
  acc_theta.reserve(static_cast<std::size_t>(cfg.m_target) * dim);
  acc_dist.reserve(cfg.m_target);
  acc_index.reserve(cfg.m_target);

  // batch working storage, reused across batches
  std::vector<std::uint8_t> flags;
  std::vector<double> thetas;
  std::vector<double> dists;

  std::uint64_t next_index = 0;
  bool done = false;
  while (!done && next_index < cfg.max_proposals &&
         acc_dist.size() < static_cast<std::size_t>(cfg.m_target)) {
    const std::uint64_t remaining_accepts = cfg.m_target - acc_dist.size();
    std::uint64_t batch;
    if (next_index == 0) {
      batch = std::max<std::uint64_t>(8192, 2 * remaining_accepts);
    } else {
      const double p_est = (static_cast<double>(acc_dist.size()) + 1.0) / static_cast<double>(next_index);
      batch = static_cast<std::uint64_t>(static_cast<double>(remaining_accepts) / p_est * 1.25) + 1024;
    }
    batch = std::clamp<std::uint64_t>(batch, 4096, 1u << 19);
    batch = std::min(batch, cfg.max_proposals - next_index);

    flags.assign(batch, 0);
    thetas.resize(batch * static_cast<std::size_t>(dim));
    dists.resize(batch);

    const std::uint64_t chunk = std::max<std::uint64_t>(128, batch / (static_cast<std::uint64_t>(threads) * 16));
    detail::parallel_for(batch, threads, chunk, [&](std::uint64_t b0, std::uint64_t b1) {
      for (std::uint64_t b = b0; b < b1; ++b) {
        RngStream rng(seed.child(stream_tag::kProposal, next_index + b));
        const ParameterVector theta = uniform_prior_draw(space, rng);
        double d;
        bool ok;
        if (use_fast) {
          const auto fd = model.fast_distance(theta, rng, observed, dist, cfg.epsilon);
          ok = fd.has_value();
          d = ok ? *fd : 0.0;
          if (ok && !(d < cfg.epsilon)) ok = false;
        } else {
          const auto summ = model.summary_from(theta, rng);
          ok = summ.has_value();
          if (ok) {
            d = distance(dist, *summ, observed);
            ok = kernel_accept(kernel, d, rng);
          } else {
            d = 0.0;
          }
        }
        if (ok) {
          flags[b] = 1;
          dists[b] = d;
          Eigen::Map<Eigen::VectorXd>(&thetas[b * static_cast<std::size_t>(dim)], dim) = theta;
        }
      }
    });

    // merge in proposal order so the result matches a serial run draw-for-draw
    for (std::uint64_t b = 0; b < batch; ++b) {
      if (!flags[b]) continue;
      acc_dist.push_back(dists[b]);
      acc_index.push_back(next_index + b);
      const double* src = &thetas[b * static_cast<std::size_t>(dim)];
      acc_theta.insert(acc_theta.end(), src, src + dim);
      if (acc_dist.size() == static_cast<std::size_t>(cfg.m_target)) {
        out.proposals_used = next_index + b + 1;
        done = true;
        break;
      }
    }
    next_index += batch;
  }

  const auto m_got = static_cast<Eigen::Index>(acc_dist.size());
  out.draws.resize(m_got, dim);
  for (Eigen::Index i = 0; i < m_got; ++i) {
    out.draws.row(i) = Eigen::Map<const Eigen::VectorXd>(&acc_theta[static_cast<std::size_t>(i) * dim], dim);
  }
  out.distances = Eigen::Map<const Eigen::VectorXd>(acc_dist.data(), m_got);
  out.proposal_indices = std::move(acc_index);

  if (!done) {
    out.proposals_used = next_index;
    out.acceptance_rate =
        out.proposals_used > 0 ? static_cast<double>(m_got) / static_cast<double>(out.proposals_used) : 0.0;
    throw PartialSampleError("abc_rejection: proposal budget exhausted after " + std::to_string(next_index) +
                                 " proposals with " + std::to_string(m_got) + " acceptances",
                             std::move(out));
  }
  out.acceptance_rate = static_cast<double>(cfg.m_target) / static_cast<double>(out.proposals_used);
  return out;
}

std::vector<LikelihoodPoint> likelihood_curve(const ModelSpec& model, const std::vector<ParameterVector>& grid,
                                              const SummaryVector& observed, double epsilon,
                                              int n_sims_per_point, RngSeed seed, const DistanceSpec& dist,
                                              KernelSpec::Kind kernel_kind, int n_threads) {
  if (grid.empty()) throw std::invalid_argument("likelihood_curve: grid must be nonempty");
  if (n_sims_per_point < 1) throw std::invalid_argument("likelihood_curve: n_sims_per_point must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("likelihood_curve: epsilon must be positive");
  if (dist.kind == DistanceSpec::Kind::kPilotMad) {
    throw std::logic_error("likelihood_curve: resolve the pilot distance first");
  }
  const KernelSpec kernel{kernel_kind, epsilon};
  const int threads = detail::resolve_threads(n_threads);
  const auto n = static_cast<std::uint64_t>(n_sims_per_point);

  std::vector<LikelihoodPoint> out(grid.size());
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    const RngSeed point_seed = seed.child(stream_tag::kCurve, pi);
    std::atomic<std::uint64_t> accepted{0};
    const std::uint64_t chunk = std::max<std::uint64_t>(256, n / (static_cast<std::uint64_t>(threads) * 16));
    detail::parallel_for(n, threads, chunk, [&](std::uint64_t s0, std::uint64_t s1) {
      std::uint64_t local = 0;
      for (std::uint64_t s = s0; s < s1; ++s) {
        RngStream rng(point_seed.child(stream_tag::kProposal, s));
        const auto summ = model.summary_from(grid[pi], rng);
        if (!summ) continue;
        const double d = distance(dist, *summ, observed);
        if (kernel_accept(kernel, d, rng)) ++local;
      }
      accepted.fetch_add(local, std::memory_order_relaxed);
    });
    const double p = static_cast<double>(accepted.load()) / static_cast<double>(n);
    out[pi].theta = grid[pi];
    out[pi].estimate = p;
    out[pi].std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
  }
  return out;
}

}  // namespace amle
