#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

#include "amle/distance.hpp"
#include "amle/rng.hpp"
#include "amle/types.hpp"

namespace amle {

/// A simulator/statistic pair. `simulate` produces a dataset given theta and
/// a stream; `statistic` reduces a dataset to the summary vector (nullopt =
/// statistic not computable, which rejection sampling treats as a miss).
///
/// `simulate_summary`, when present, samples statistic(simulate(theta))
/// exactly without materialising the dataset; `fast_distance` additionally
/// folds in the distance to a fixed observed summary so components can be
/// rejected early. Both are optional exact shortcuts and must agree in
/// distribution with the plain path.
struct ModelSpec {
  std::string name;
  int statistic_dim = 0;
  std::function<Dataset(const ParameterVector&, RngStream&)> simulate;
  std::function<std::optional<SummaryVector>(const Dataset&)> statistic;
  std::function<std::optional<SummaryVector>(const ParameterVector&, RngStream&)> simulate_summary;
  /// Returns the distance to `observed`, or any value >= `bound` once a
  /// partial distance already reaches the bound (early rejection).
  std::function<std::optional<double>(const ParameterVector&, RngStream&, const SummaryVector& observed,
                                      const DistanceSpec&, double bound)>
      fast_distance;

  /// Dispatch: fast summary path when available, else statistic(simulate()).
  [[nodiscard]] std::optional<SummaryVector> summary_from(const ParameterVector& theta, RngStream& rng) const;
};

// ---------------------------------------------------------------------------
// Simulators
// ---------------------------------------------------------------------------

/// n i.i.d. Binomial(size, theta) draws as an n x 1 real sample.
Dataset simulate_binomial(double theta, int n, int size, RngStream& rng);

/// n i.i.d. Normal(mu, sigma^2) draws.
Dataset simulate_normal(double mu, double sigma, int n, RngStream& rng);

/// n i.i.d. alpha-stable draws, Chambers-Mallows-Stuck transform in the
/// 0-parameterisation (continuous in alpha; mu is a genuine location, and
/// for beta = 0 the draw is mu + sigma * S with S standard symmetric).
Dataset simulate_stable(double alpha, double beta, double mu, double sigma, int n, RngStream& rng);

/// One standard draw of the 0-parameterised stable law (mu=0, sigma=1).
double stable_standard_draw(double alpha, double beta, RngStream& rng);

/// Superposition of N independent ordinary renewal processes on (0, t0],
/// each with i.i.d. Gamma(shape alpha, rate beta) inter-arrival times
/// started at time zero. Returns merged, sorted event times (may be empty).
Dataset simulate_superposed_gamma(long N, double alpha, double beta, double t0, RngStream& rng);

// ---------------------------------------------------------------------------
// Summary statistics
// ---------------------------------------------------------------------------

/// Arithmetic mean of a univariate real sample.
SummaryVector stat_mean(const Dataset& data);

/// (mean, sample standard deviation with divisor n-1); requires n >= 2.
SummaryVector stat_mean_sd(const Dataset& data);

/// Grid of nonzero, duplicate-free evaluation points for the ECF statistic.
struct EcfGrid {
  Eigen::VectorXd t_values;
};

EcfGrid make_ecf_grid(Eigen::VectorXd t_values);

/// Empirical characteristic function on the grid: per t, the pair
/// ((1/n) sum cos(t x_j), (1/n) sum sin(t x_j)), concatenated in grid order.
SummaryVector ecf_statistic(const Dataset& data, const EcfGrid& grid);

/// The eight (optionally nine) point-process statistics of the superposed
/// gamma experiment, in order: event rate, CV of inter-event intervals, sum
/// of the first five interval autocorrelations, mean interval, and indexes
/// of dispersion for bin lengths 1, 5, 10, 20 (+ interval skewness).
/// Needs at least 7 events; returns nullopt otherwise.
std::optional<SummaryVector> stats_superposed(const Dataset& data, bool include_skewness);

/// Empirical quantile pair (type-7 interpolation) at 0 < q1 < q2 < 1.
SummaryVector quantile_stat(const Dataset& data, double q1, double q2);

/// Explicit inverse of the location-scale quantile map:
/// sigma = (eta1 - eta2) / (z1 - z2), mu = eta1 - sigma * z1, where
/// z_i = F0^{-1}(q_i). Returns (sigma, mu).
std::pair<double, double> locscale_g_inverse(double eta1, double eta2, double z1, double z2);

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

/// Binomial(size, theta) sample of n observations, statistic x-bar.
/// Carries an exact sufficient-statistic fast path (x-bar = B/n with
/// B ~ Binomial(n*size, theta)).
ModelSpec make_binomial_model(int n, int size = 10);

/// Normal(mu, sigma) sample of n observations, statistic (x-bar, s).
/// Fast path samples the sufficient pair exactly: x-bar ~ N(mu, sigma^2/n),
/// s = sigma * sqrt(chi^2_{n-1} / (n-1)) independently.
ModelSpec make_normal_model(int n);

/// Symmetric-by-default stable model with the ECF summary statistic.
/// Parameters in space order (alpha, mu, sigma); beta is fixed.
ModelSpec make_stable_model(int n, EcfGrid grid, double beta = 0.0);

/// Superposed gamma renewal model, parameters (N, alpha, beta) with N the
/// (discrete) number of processes; 8 or 9 summary statistics.
ModelSpec make_superposed_gamma_model(double t0, bool include_skewness);

/// Location-scale model with standard normal F0 and the empirical-quantile
/// statistic at (q1, q2). When map_g_inverse is set the summary is the
/// g-inverse image (mu-hat, sigma-hat) in space order, so summary-space
/// distances are parameter-space distances. Has an exact fast path via
/// joint order-statistic sampling.
ModelSpec make_locscale_quantile_model(int n, double q1, double q2, bool map_g_inverse = true);

}  // namespace amle
