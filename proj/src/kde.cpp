#include "amle/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "parallel.hpp"

namespace amle {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

double normalization(const KdeModel& model) {
  const auto d = model.bandwidth.size();
  const double log_h = model.bandwidth.array().log().sum();
  const double m = static_cast<double>(model.points.rows());
  return std::exp(-0.5 * static_cast<double>(d) * kLog2Pi - log_h) / m;
}

}  // namespace

KdeModel make_kde(Eigen::MatrixXd points, Eigen::VectorXd bandwidth) {
  if (points.rows() < 2) throw std::invalid_argument("KdeModel: needs at least two sample points");
  if (points.cols() < 1) throw std::invalid_argument("KdeModel: needs at least one dimension");
  if (bandwidth.size() != points.cols()) throw std::invalid_argument("KdeModel: bandwidth length mismatch");
  if ((bandwidth.array() <= 0.0).any() || !bandwidth.allFinite()) {
    throw std::invalid_argument("KdeModel: bandwidths must be positive and finite");
  }
  return KdeModel{std::move(points), std::move(bandwidth)};
}

Eigen::VectorXd bandwidth_silverman(const Eigen::MatrixXd& points) {
  const Eigen::Index m = points.rows();
  const Eigen::Index d = points.cols();
  if (m < 2) throw std::invalid_argument("bandwidth_silverman: needs at least two points");
  const double factor =
      std::pow(4.0 / (static_cast<double>(d + 2) * static_cast<double>(m)), 1.0 / static_cast<double>(d + 4));
  Eigen::VectorXd h(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mu = points.col(j).mean();
    const double sd = std::sqrt((points.col(j).array() - mu).square().sum() / static_cast<double>(m - 1));
    if (!(sd > 0.0)) {
      throw DegenerateSampleError("bandwidth_silverman: zero variance in dimension " + std::to_string(j));
    }
    h[j] = sd * factor;
  }
  return h;
}

double bandwidth_lscv_1d(const Eigen::VectorXd& points) {
  const Eigen::Index n = points.size();
  if (n < 3) throw std::invalid_argument("bandwidth_lscv_1d: needs at least three points");
  const double mu = points.mean();
  const double sd = std::sqrt((points.array() - mu).square().sum() / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateSampleError("bandwidth_lscv_1d: zero variance");

  // exact Gaussian-kernel LSCV objective, O(n^2) per evaluation
  auto objective = [&](double h) {
    const double nn = static_cast<double>(n);
    double s2 = 0.0;  // sum over i<j of exp(-u^2/4)
    double s1 = 0.0;  // sum over i<j of exp(-u^2/2)
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double u = (points[i] - points[j]) / h;
        const double q = u * u;
        s2 += std::exp(-0.25 * q);
        s1 += std::exp(-0.5 * q);
      }
    }
    const double int_f2 = (nn + 2.0 * s2) / (2.0 * std::sqrt(M_PI) * nn * nn * h);
    const double loo = 2.0 * (2.0 * s1) / (nn * (nn - 1.0) * h * std::sqrt(2.0 * M_PI));
    return int_f2 - loo;
  };

  const double h0 = sd * std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.2);
  double lo = h0 / 8.0, hi = h0 * 4.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 60 && (b - a) > 1e-4 * h0; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  return 0.5 * (a + b);
}

double kde_eval(const KdeModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.points.cols()) throw std::invalid_argument("kde_eval: dimension mismatch");
  const Eigen::ArrayXd q = ((model.points.rowwise() - z.transpose()).array().rowwise() /
                            model.bandwidth.transpose().array())
                               .square()
                               .rowwise()
                               .sum();
  return (-0.5 * q).exp().sum() * normalization(model);
}

Eigen::VectorXd kde_eval_rows(const KdeModel& model, const Eigen::MatrixXd& zs, int n_threads) {
  if (zs.cols() != model.points.cols()) throw std::invalid_argument("kde_eval_rows: dimension mismatch");
  const Eigen::Index nz = zs.rows();
  const Eigen::Index m = model.points.rows();
  const double norm = normalization(model);

  // scale once, then blocked Gram products: |a-b|^2 = |a|^2 + |b|^2 - 2 a.b
  const Eigen::MatrixXd pts = model.points.array().rowwise() / model.bandwidth.transpose().array();
  const Eigen::MatrixXd zss = zs.array().rowwise() / model.bandwidth.transpose().array();
  const Eigen::VectorXd pn = pts.rowwise().squaredNorm();
  const Eigen::VectorXd zn = zss.rowwise().squaredNorm();

  Eigen::VectorXd out(nz);
  constexpr Eigen::Index kBlock = 256;
  const auto n_blocks = static_cast<std::uint64_t>((nz + kBlock - 1) / kBlock);
  detail::parallel_for(n_blocks, n_threads, 1, [&](std::uint64_t b0, std::uint64_t b1) {
    Eigen::MatrixXd cross;
    for (std::uint64_t blk = b0; blk < b1; ++blk) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(blk) * kBlock;
      const Eigen::Index rows = std::min<Eigen::Index>(kBlock, nz - r0);
      cross.noalias() = zss.middleRows(r0, rows) * pts.transpose();
      for (Eigen::Index i = 0; i < rows; ++i) {
        const Eigen::ArrayXd q =
            (zn[r0 + i] + pn.array() - 2.0 * cross.row(i).transpose().array()).max(0.0);
        out[r0 + i] = (-0.5 * q).exp().sum() * norm;
      }
    }
  });
  (void)m;
  return out;
}

Eigen::VectorXd kde_gradient(const KdeModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.points.cols()) throw std::invalid_argument("kde_gradient: dimension mismatch");
  const Eigen::ArrayXXd diff = (model.points.rowwise() - z.transpose()).array();
  const Eigen::ArrayXd q =
      (diff.rowwise() / model.bandwidth.transpose().array()).square().rowwise().sum();
  const Eigen::ArrayXd w = (-0.5 * q).exp();
  // d/dz_k: sum_j w_j (Z_jk - z_k) / h_k^2
  Eigen::VectorXd grad =
      (diff.colwise() * w).colwise().sum().transpose().array() / model.bandwidth.array().square();
  return grad * normalization(model);
}

Eigen::VectorXd mean_shift_step(const KdeModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.points.cols()) throw std::invalid_argument("mean_shift_step: dimension mismatch");
  const Eigen::ArrayXd q = ((model.points.rowwise() - z.transpose()).array().rowwise() /
                            model.bandwidth.transpose().array())
                               .square()
                               .rowwise()
                               .sum();
  const Eigen::ArrayXd w = (-0.5 * q).exp();
  const double total = w.sum();
  if (!(total > 0.0)) {
    throw LostTrackError("mean_shift_step: every kernel weight underflowed to zero");
  }
  return (model.points.array().colwise() * w).colwise().sum().transpose() / total;
}

ModeResult mode_search(const KdeModel& model, const ModeSearchOptions& opts) {
  if (opts.n_starts < 1) throw std::invalid_argument("mode_search: n_starts must be >= 1");
  const Eigen::Index m = model.points.rows();
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-8 * model.bandwidth.maxCoeff();

  // rank sample points by density, take the best as starts
  const Eigen::VectorXd dens = kde_eval_rows(model, model.points, opts.n_threads);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&dens](Eigen::Index a, Eigen::Index b) {
    if (dens[a] != dens[b]) return dens[a] > dens[b];
    return a < b;
  });
  const auto n_starts = static_cast<std::size_t>(std::min<Eigen::Index>(opts.n_starts, m));

  struct Candidate {
    Eigen::VectorXd z;
    double density = -1.0;
    int iterations = 0;
  };
  std::vector<Candidate> cands(n_starts);
  detail::parallel_for(n_starts, opts.n_threads, 1, [&](std::uint64_t s0, std::uint64_t s1) {
    for (std::uint64_t s = s0; s < s1; ++s) {
      Eigen::VectorXd z = model.points.row(order[s]).transpose();
      int it = 0;
      for (; it < opts.max_iterations; ++it) {
        Eigen::VectorXd zn = mean_shift_step(model, z);
        const double step = (zn - z).norm();
        z = std::move(zn);
        if (step < tol) break;
      }
      cands[s].z = std::move(z);
      cands[s].density = kde_eval(model, cands[s].z);
      cands[s].iterations = it;
    }
  });

  // best density; ties within 1e-9 break toward the lexicographically smallest
  double best_density = -1.0;
  for (const auto& c : cands) best_density = std::max(best_density, c.density);
  const Candidate* best = nullptr;
  for (const auto& c : cands) {
    if (c.density + 1e-9 < best_density) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    const bool lex_smaller = std::lexicographical_compare(c.z.data(), c.z.data() + c.z.size(), best->z.data(),
                                                          best->z.data() + best->z.size());
    if (lex_smaller) best = &c;
  }

  ModeResult out;
  out.location = best->z;
  out.density_value = kde_eval(model, out.location);
  out.iterations = best->iterations;
  const double resid = (mean_shift_step(model, out.location) - out.location).norm();
  out.inside_hull = resid <= 10.0 * tol;  // near fixed point => convex combination of the sample
  return out;
}

}  // namespace amle
