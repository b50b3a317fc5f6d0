#pragma once

#include <Eigen/Dense>

#include "amle/errors.hpp"

namespace amle {

/// Product-Gaussian Parzen estimator: sample points (rows) plus one positive
/// bandwidth per dimension.
struct KdeModel {
  Eigen::MatrixXd points;     // m x d, m >= 2
  Eigen::VectorXd bandwidth;  // d, all > 0
};

[[nodiscard]] KdeModel make_kde(Eigen::MatrixXd points, Eigen::VectorXd bandwidth);

/// Silverman's rule per dimension: h_j = sd_j * (4 / ((d+2) m))^(1/(d+4)).
/// Throws DegenerateSampleError when any dimension has zero variance.
[[nodiscard]] Eigen::VectorXd bandwidth_silverman(const Eigen::MatrixXd& points);

/// Least-squares cross-validation bandwidth for univariate samples
/// (exact Gaussian-kernel LSCV objective, golden-section search).
[[nodiscard]] double bandwidth_lscv_1d(const Eigen::VectorXd& points);

/// Density estimate at z; integrates to one over R^d.
[[nodiscard]] double kde_eval(const KdeModel& model, const Eigen::VectorXd& z);

/// Density at each row of zs; parallelised over rows for large batches.
[[nodiscard]] Eigen::VectorXd kde_eval_rows(const KdeModel& model, const Eigen::MatrixXd& zs, int n_threads = 0);

/// Analytic gradient of kde_eval.
[[nodiscard]] Eigen::VectorXd kde_gradient(const KdeModel& model, const Eigen::VectorXd& z);

/// One Gaussian mean-shift step: the kernel-weighted mean of the sample at z.
/// Throws LostTrackError if every weight underflows to zero.
[[nodiscard]] Eigen::VectorXd mean_shift_step(const KdeModel& model, const Eigen::VectorXd& z);

struct ModeSearchOptions {
  int n_starts = 50;         // mean-shift starts, taken from the highest-density sample points
  double tol = 0.0;          // step-size stop; 0 = 1e-8 * max bandwidth
  int max_iterations = 10000;
  int n_threads = 0;
};

struct ModeResult {
  Eigen::VectorXd location;
  double density_value = 0.0;
  int iterations = 0;       // iterations of the winning start
  bool inside_hull = false; // fixed-point certificate: location is a convex
                            // combination of sample points
};

/// Multi-start Gaussian mean-shift maximisation of the KDE. Ties in density
/// closer than 1e-9 break toward the lexicographically smallest location.
[[nodiscard]] ModeResult mode_search(const KdeModel& model, const ModeSearchOptions& opts = {});

}  // namespace amle
