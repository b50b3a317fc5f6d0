#include "amle/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "amle/stats.hpp"

namespace amle {

namespace {

const Eigen::MatrixXd& real_values(const Dataset& data, const char* who) {
  const auto* rs = std::get_if<RealSample>(&data);
  if (rs == nullptr) throw std::invalid_argument(std::string(who) + ": expected a real-valued sample");
  return rs->values;
}

Eigen::VectorXd univariate(const Dataset& data, const char* who) {
  const Eigen::MatrixXd& v = real_values(data, who);
  if (v.cols() != 1) throw std::invalid_argument(std::string(who) + ": expected a univariate sample");
  return v.col(0);
}

}  // namespace

std::optional<SummaryVector> ModelSpec::summary_from(const ParameterVector& theta, RngStream& rng) const {
  if (simulate_summary) return simulate_summary(theta, rng);
  return statistic(simulate(theta, rng));
}

// ---------------------------------------------------------------------------
// Simulators
// ---------------------------------------------------------------------------

Dataset simulate_binomial(double theta, int n, int size, RngStream& rng) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("simulate_binomial: theta must be in (0,1)");
  if (n < 1 || size < 1) throw std::invalid_argument("simulate_binomial: n and size must be >= 1");
  Eigen::MatrixXd out(n, 1);
  for (int i = 0; i < n; ++i) out(i, 0) = static_cast<double>(rng.binomial(size, theta));
  return RealSample{std::move(out)};
}

Dataset simulate_normal(double mu, double sigma, int n, RngStream& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_normal: sigma must be positive");
  if (n < 1) throw std::invalid_argument("simulate_normal: n must be >= 1");
  Eigen::MatrixXd out(n, 1);
  for (int i = 0; i < n; ++i) out(i, 0) = mu + sigma * rng.normal();
  return RealSample{std::move(out)};
}

namespace {

// Per-call constants of the Chambers-Mallows-Stuck transform.
struct StableConstants {
  double alpha = 2.0;
  double inv_alpha = 0.5;
  double expo = 0.0;       // (1 - alpha) / alpha
  double shift = 0.0;      // beta * tan(pi alpha / 2); subtracted for the 0-parameterisation
  double b_angle = 0.0;    // atan(shift) / alpha
  double scale_ab = 1.0;   // (1 + shift^2)^(1/(2 alpha))
  bool alpha_is_one = false;
  double beta = 0.0;
};

StableConstants stable_setup(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("stable: alpha must be in (0,2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw std::invalid_argument("stable: beta must be in [-1,1]");
  StableConstants k;
  k.alpha = alpha;
  k.beta = beta;
  k.alpha_is_one = std::abs(alpha - 1.0) < 1e-12;
  if (!k.alpha_is_one) {
    k.inv_alpha = 1.0 / alpha;
    k.expo = (1.0 - alpha) / alpha;
    k.shift = beta * std::tan(0.5 * M_PI * alpha);
    k.b_angle = std::atan(k.shift) / alpha;
    k.scale_ab = std::pow(1.0 + k.shift * k.shift, 0.5 / alpha);
  }
  return k;
}

double stable_draw_with(const StableConstants& k, RngStream& rng) {
  const double u = rng.uniform(-0.5 * M_PI, 0.5 * M_PI);
  const double w = rng.exponential(1.0);
  if (k.alpha_is_one) {
    if (k.beta == 0.0) return std::tan(u);
    const double h = 0.5 * M_PI;
    return ((h + k.beta * u) * std::tan(u) -
            k.beta * std::log((h * w * std::cos(u)) / (h + k.beta * u))) /
           h;
  }
  const double su = std::sin(u);
  const double cu = std::cos(u);
  const double a = k.alpha * (u + k.b_angle);
  const double sa = std::sin(a);
  const double ca = std::cos(a);
  // cos(u - a) without another trig call
  const double cua = cu * ca + su * sa;
  const double z = k.scale_ab * sa * std::pow(cu, -k.inv_alpha) * std::pow(cua / w, k.expo);
  return z - k.shift;
}

}  // namespace

double stable_standard_draw(double alpha, double beta, RngStream& rng) {
  return stable_draw_with(stable_setup(alpha, beta), rng);
}

Dataset simulate_stable(double alpha, double beta, double mu, double sigma, int n, RngStream& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_stable: sigma must be positive");
  if (n < 1) throw std::invalid_argument("simulate_stable: n must be >= 1");
  const StableConstants k = stable_setup(alpha, beta);
  Eigen::MatrixXd out(n, 1);
  for (int i = 0; i < n; ++i) out(i, 0) = mu + sigma * stable_draw_with(k, rng);
  return RealSample{std::move(out)};
}

Dataset simulate_superposed_gamma(long N, double alpha, double beta, double t0, RngStream& rng) {
  if (N < 1) throw std::invalid_argument("simulate_superposed_gamma: N must be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("simulate_superposed_gamma: alpha, beta > 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("simulate_superposed_gamma: t0 must be positive");
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(1.3 * static_cast<double>(N) * t0 * beta / alpha) + 16);
  for (long p = 0; p < N; ++p) {
    double t = 0.0;
    for (;;) {
      t += rng.gamma(alpha, beta);
      if (t > t0) break;
      all.push_back(t);
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());  // exact ties have probability zero
  Eigen::VectorXd times = Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
  return EventTimes{std::move(times), t0};
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

SummaryVector stat_mean(const Dataset& data) {
  const Eigen::VectorXd x = univariate(data, "stat_mean");
  if (x.size() == 0) throw std::invalid_argument("stat_mean: empty sample");
  Eigen::VectorXd c(1);
  c[0] = x.mean();
  return SummaryVector{std::move(c), std::nullopt};
}

SummaryVector stat_mean_sd(const Dataset& data) {
  const Eigen::VectorXd x = univariate(data, "stat_mean_sd");
  if (x.size() < 2) throw std::invalid_argument("stat_mean_sd: needs n >= 2");
  Eigen::VectorXd c(2);
  c[0] = x.mean();
  c[1] = sample_sd(x);
  return SummaryVector{std::move(c), std::nullopt};
}

EcfGrid make_ecf_grid(Eigen::VectorXd t_values) {
  if (t_values.size() == 0) throw std::invalid_argument("EcfGrid: must be nonempty");
  for (Eigen::Index i = 0; i < t_values.size(); ++i) {
    if (t_values[i] == 0.0) throw std::invalid_argument("EcfGrid: t = 0 carries no information");
    for (Eigen::Index j = i + 1; j < t_values.size(); ++j) {
      if (t_values[i] == t_values[j]) throw std::invalid_argument("EcfGrid: duplicate t value");
    }
  }
  return EcfGrid{std::move(t_values)};
}

namespace {

// When every |t| is a small integer multiple of the smallest |t|, the
// cos/sin at all grid points follow from one sincos per sample via angle
// addition, which matters in the rejection loop (one call per proposal).
struct EcfPlan {
  bool fast = false;
  double base = 0.0;
  int max_multiple = 0;
  std::vector<int> multiple;  // per grid entry, |t_i| / base
};

EcfPlan plan_ecf(const Eigen::VectorXd& t) {
  EcfPlan plan;
  double base = std::abs(t[0]);
  for (Eigen::Index i = 1; i < t.size(); ++i) base = std::min(base, std::abs(t[i]));
  plan.base = base;
  plan.multiple.resize(static_cast<std::size_t>(t.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double r = std::abs(t[i]) / base;
    const double rr = std::round(r);
    if (rr < 1.0 || rr > 64.0 || std::abs(r - rr) > 1e-9) return plan;  // general path
    plan.multiple[static_cast<std::size_t>(i)] = static_cast<int>(rr);
    plan.max_multiple = std::max(plan.max_multiple, static_cast<int>(rr));
  }
  plan.fast = true;
  return plan;
}

}  // namespace

SummaryVector ecf_statistic(const Dataset& data, const EcfGrid& grid) {
  const Eigen::VectorXd x = univariate(data, "ecf_statistic");
  const Eigen::Index n = x.size();
  if (n < 1) throw std::invalid_argument("ecf_statistic: empty sample");
  const Eigen::VectorXd& t = grid.t_values;
  const Eigen::Index g = t.size();
  Eigen::VectorXd comps(2 * g);

  static thread_local EcfPlan plan;
  static thread_local Eigen::VectorXd plan_key;
  if (plan_key.size() != t.size() || plan_key != t) {
    plan = plan_ecf(t);
    plan_key = t;
  }

  if (plan.fast) {
    const int mm = plan.max_multiple;
    std::vector<double> sumc(static_cast<std::size_t>(mm) + 1, 0.0);
    std::vector<double> sums(static_cast<std::size_t>(mm) + 1, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = plan.base * x[i];
      const double c1 = std::cos(u);
      const double s1 = std::sin(u);
      double cj = c1, sj = s1;
      sumc[1] += c1;
      sums[1] += s1;
      for (int j = 2; j <= mm; ++j) {
        const double cn = cj * c1 - sj * s1;
        const double sn = sj * c1 + cj * s1;
        cj = cn;
        sj = sn;
        sumc[static_cast<std::size_t>(j)] += cj;
        sums[static_cast<std::size_t>(j)] += sj;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index k = 0; k < g; ++k) {
      const int m = plan.multiple[static_cast<std::size_t>(k)];
      const double sign = t[k] < 0.0 ? -1.0 : 1.0;
      comps[2 * k] = sumc[static_cast<std::size_t>(m)] * inv_n;
      comps[2 * k + 1] = sign * sums[static_cast<std::size_t>(m)] * inv_n;
    }
  } else {
    for (Eigen::Index k = 0; k < g; ++k) {
      double sc = 0.0, ss = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = t[k] * x[i];
        sc += std::cos(a);
        ss += std::sin(a);
      }
      comps[2 * k] = sc / static_cast<double>(n);
      comps[2 * k + 1] = ss / static_cast<double>(n);
    }
  }
  return SummaryVector{std::move(comps), std::nullopt};
}

std::optional<SummaryVector> stats_superposed(const Dataset& data, bool include_skewness) {
  const auto* ev = std::get_if<EventTimes>(&data);
  if (ev == nullptr) throw std::invalid_argument("stats_superposed: expected event times");
  const Eigen::VectorXd& times = ev->times;
  const double t0 = ev->horizon;
  const Eigen::Index n = times.size();
  if (n < 7) return std::nullopt;  // lag-5 autocorrelation needs the intervals

  const Eigen::Index nd = n - 1;
  Eigen::VectorXd d(nd);
  for (Eigen::Index i = 0; i < nd; ++i) d[i] = times[i + 1] - times[i];

  const double m1 = d.mean();
  Eigen::VectorXd dev = d.array() - m1;
  const double ss = dev.squaredNorm();
  const double cv = m1 > 0.0 ? std::sqrt(ss / static_cast<double>(nd - 1)) / m1 : 0.0;

  double sum_r = 0.0;
  if (ss > 0.0) {
    for (int k = 1; k <= 5; ++k) {
      sum_r += dev.head(nd - k).dot(dev.tail(nd - k)) / ss;
    }
  }

  Eigen::VectorXd comps(include_skewness ? 9 : 8);
  comps[0] = static_cast<double>(n) / t0;
  comps[1] = cv;
  comps[2] = sum_r;
  comps[3] = m1;

  const double lengths[4] = {1.0, 5.0, 10.0, 20.0};
  for (int li = 0; li < 4; ++li) {
    const double L = lengths[li];
    const auto bins = static_cast<Eigen::Index>(std::floor(t0 / L));
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(bins);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto b = static_cast<Eigen::Index>(std::floor(times[i] / L));
      if (b >= 0 && b < bins) counts[b] += 1.0;
    }
    const double cm = counts.mean();
    double idx = 0.0;
    if (cm > 0.0 && bins > 1) {
      const double var = (counts.array() - cm).square().sum() / static_cast<double>(bins - 1);
      idx = var / cm;
    }
    comps[4 + li] = idx;
  }

  if (include_skewness) {
    double skew = 0.0;
    if (ss > 0.0) {
      const double m2 = ss / static_cast<double>(nd);
      const double m3 = dev.array().cube().sum() / static_cast<double>(nd);
      skew = m3 / std::pow(m2, 1.5);
    }
    comps[8] = skew;
  }
  return SummaryVector{std::move(comps), std::nullopt};
}

SummaryVector quantile_stat(const Dataset& data, double q1, double q2) {
  if (!(q1 > 0.0 && q1 < q2 && q2 < 1.0)) throw std::invalid_argument("quantile_stat: need 0 < q1 < q2 < 1");
  Eigen::VectorXd x = univariate(data, "quantile_stat");
  std::sort(x.data(), x.data() + x.size());
  Eigen::VectorXd c(2);
  c[0] = quantile_type7_sorted(x, q1);
  c[1] = quantile_type7_sorted(x, q2);
  return SummaryVector{std::move(c), std::nullopt};
}

std::pair<double, double> locscale_g_inverse(double eta1, double eta2, double z1, double z2) {
  if (z1 == z2) throw std::invalid_argument("locscale_g_inverse: reference quantiles must differ");
  const double sigma = (eta1 - eta2) / (z1 - z2);
  const double mu = eta1 - sigma * z1;
  return {sigma, mu};
}

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

ModelSpec make_binomial_model(int n, int size) {
  if (n < 1 || size < 1) throw std::invalid_argument("make_binomial_model: n and size must be >= 1");
  ModelSpec m;
  m.name = "binomial";
  m.statistic_dim = 1;
  m.simulate = [n, size](const ParameterVector& theta, RngStream& rng) {
    return simulate_binomial(theta[0], n, size, rng);
  };
  m.statistic = [](const Dataset& data) -> std::optional<SummaryVector> { return stat_mean(data); };
  // sufficient statistic: x-bar = B / n with B ~ Binomial(n * size, theta)
  m.simulate_summary = [n, size](const ParameterVector& theta, RngStream& rng) -> std::optional<SummaryVector> {
    const long b = rng.binomial(static_cast<long>(n) * size, theta[0]);
    Eigen::VectorXd c(1);
    c[0] = static_cast<double>(b) / static_cast<double>(n);
    return SummaryVector{std::move(c), std::nullopt};
  };
  return m;
}

ModelSpec make_normal_model(int n) {
  if (n < 2) throw std::invalid_argument("make_normal_model: n must be >= 2");
  ModelSpec m;
  m.name = "normal";
  m.statistic_dim = 2;
  m.simulate = [n](const ParameterVector& theta, RngStream& rng) {
    return simulate_normal(theta[0], theta[1], n, rng);
  };
  m.statistic = [](const Dataset& data) -> std::optional<SummaryVector> { return stat_mean_sd(data); };
  // sufficient pair sampled exactly: x-bar ~ N(mu, sigma^2/n), independent
  // s = sigma sqrt(chi^2_{n-1}/(n-1))
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  m.simulate_summary = [inv_sqrt_n, n](const ParameterVector& theta, RngStream& rng) -> std::optional<SummaryVector> {
    Eigen::VectorXd c(2);
    c[0] = theta[0] + theta[1] * inv_sqrt_n * rng.normal();
    c[1] = theta[1] * std::sqrt(rng.chi_squared(static_cast<double>(n - 1)) / static_cast<double>(n - 1));
    return SummaryVector{std::move(c), std::nullopt};
  };
  m.fast_distance = [inv_sqrt_n, n](const ParameterVector& theta, RngStream& rng, const SummaryVector& obs,
                                    const DistanceSpec& dist, double bound) -> std::optional<double> {
    const bool weighted = dist.kind == DistanceSpec::Kind::kWeightedEuclidean;
    const double s0 = weighted ? dist.scale[0] : 1.0;
    const double s1 = weighted ? dist.scale[1] : 1.0;
    const double xbar = theta[0] + theta[1] * inv_sqrt_n * rng.normal();
    const double z0 = (xbar - obs.components[0]) / s0;
    if (std::abs(z0) >= bound) return std::abs(z0);  // the sd component can only grow the distance
    const double s = theta[1] * std::sqrt(rng.chi_squared(static_cast<double>(n - 1)) / static_cast<double>(n - 1));
    const double z1 = (s - obs.components[1]) / s1;
    return std::sqrt(z0 * z0 + z1 * z1);
  };
  return m;
}

ModelSpec make_stable_model(int n, EcfGrid grid, double beta) {
  if (n < 1) throw std::invalid_argument("make_stable_model: n must be >= 1");
  ModelSpec m;
  m.name = "stable_ecf";
  m.statistic_dim = static_cast<int>(2 * grid.t_values.size());
  m.simulate = [n, beta](const ParameterVector& theta, RngStream& rng) {
    return simulate_stable(theta[0], beta, theta[1], theta[2], n, rng);
  };
  m.statistic = [grid](const Dataset& data) -> std::optional<SummaryVector> {
    return ecf_statistic(data, grid);
  };
  return m;
}

ModelSpec make_superposed_gamma_model(double t0, bool include_skewness) {
  if (!(t0 > 0.0)) throw std::invalid_argument("make_superposed_gamma_model: t0 must be positive");
  ModelSpec m;
  m.name = include_skewness ? "superposed_gamma_9" : "superposed_gamma_8";
  m.statistic_dim = include_skewness ? 9 : 8;
  m.simulate = [t0](const ParameterVector& theta, RngStream& rng) {
    return simulate_superposed_gamma(std::lround(theta[0]), theta[1], theta[2], t0, rng);
  };
  m.statistic = [include_skewness](const Dataset& data) { return stats_superposed(data, include_skewness); };
  return m;
}

ModelSpec make_locscale_quantile_model(int n, double q1, double q2, bool map_g_inverse) {
  if (n < 2) throw std::invalid_argument("make_locscale_quantile_model: n must be >= 2");
  if (!(q1 > 0.0 && q1 < q2 && q2 < 1.0)) throw std::invalid_argument("make_locscale_quantile_model: bad quantiles");
  const double z1 = normal_quantile(q1);
  const double z2 = normal_quantile(q2);
  ModelSpec m;
  m.name = "locscale_quantile";
  m.statistic_dim = 2;
  m.simulate = [n](const ParameterVector& theta, RngStream& rng) {
    return simulate_normal(theta[0], theta[1], n, rng);
  };
  auto to_summary = [q1, q2, z1, z2, map_g_inverse](const Dataset& data) -> SummaryVector {
    SummaryVector raw = quantile_stat(data, q1, q2);
    if (!map_g_inverse) return raw;
    const auto [sigma, mu] = locscale_g_inverse(raw.components[0], raw.components[1], z1, z2);
    Eigen::VectorXd c(2);
    c[0] = mu;  // space order (mu, sigma)
    c[1] = sigma;
    return SummaryVector{std::move(c), std::nullopt};
  };
  m.statistic = [to_summary](const Dataset& data) -> std::optional<SummaryVector> { return to_summary(data); };

  // exact fast path: the two interpolated quantiles depend on four order
  // statistics, sampled jointly through uniform spacings
  const double h1 = static_cast<double>(n - 1) * q1;
  const double h2 = static_cast<double>(n - 1) * q2;
  const long j1 = static_cast<long>(std::floor(h1));
  const long j2 = static_cast<long>(std::floor(h2));
  const double g1 = h1 - static_cast<double>(j1);
  const double g2 = h2 - static_cast<double>(j2);
  std::vector<long> ranks;  // 1-based, strictly increasing
  for (long r : {j1 + 1, j1 + 2, j2 + 1, j2 + 2}) {
    if (r >= 1 && r <= n && (ranks.empty() || r > ranks.back())) ranks.push_back(r);
  }
  m.simulate_summary = [n, ranks, j1, j2, g1, g2, z1, z2, q1, q2,
                        map_g_inverse](const ParameterVector& theta, RngStream& rng) -> std::optional<SummaryVector> {
    double u_prev = 0.0;
    long r_prev = 0;
    std::vector<double> us(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      const long r = ranks[i];
      const double b = rng.beta(static_cast<double>(r - r_prev), static_cast<double>(n - r + 1));
      u_prev = u_prev + (1.0 - u_prev) * b;
      us[i] = u_prev;
      r_prev = r;
    }
    auto value_at = [&](long rank) {
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] == rank) return theta[0] + theta[1] * normal_quantile(us[i]);
      }
      throw std::logic_error("locscale fast path: rank not sampled");
    };
    const double eta1 = (1.0 - g1) * value_at(j1 + 1) + (g1 > 0.0 ? g1 * value_at(j1 + 2) : 0.0);
    const double eta2 = (1.0 - g2) * value_at(j2 + 1) + (g2 > 0.0 ? g2 * value_at(j2 + 2) : 0.0);
    Eigen::VectorXd c(2);
    if (map_g_inverse) {
      const auto [sigma, mu] = locscale_g_inverse(eta1, eta2, z1, z2);
      c[0] = mu;
      c[1] = sigma;
    } else {
      c[0] = eta1;
      c[1] = eta2;
    }
    (void)q1;
    (void)q2;
    return SummaryVector{std::move(c), std::nullopt};
  };
  return m;
}

}  // namespace amle
