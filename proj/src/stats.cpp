#include "amle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amle {

double mean(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("mean: empty sample");
  return x.mean();
}

double sample_sd(const Eigen::VectorXd& x) {
  if (x.size() < 2) throw std::invalid_argument("sample_sd: needs n >= 2");
  const double m = x.mean();
  return std::sqrt((x.array() - m).square().sum() / static_cast<double>(x.size() - 1));
}

double quantile_type7_sorted(const Eigen::VectorXd& sorted, double q) {
  const Eigen::Index n = sorted.size();
  if (n == 0) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must be in [0,1]");
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * q;
  const auto j = static_cast<Eigen::Index>(std::floor(h));
  if (j >= n - 1) return sorted[n - 1];
  const double g = h - static_cast<double>(j);
  return (1.0 - g) * sorted[j] + g * sorted[j + 1];
}

double quantile_type7(Eigen::VectorXd x, double q) {
  std::sort(x.data(), x.data() + x.size());
  return quantile_type7_sorted(x, q);
}

double median(const Eigen::VectorXd& x) { return quantile_type7(x, 0.5); }

double mad(const Eigen::VectorXd& x) {
  const double med = median(x);
  return median((x.array() - med).abs().matrix());
}

FiveNumberSummary five_number_summary(const Eigen::VectorXd& x) {
  Eigen::VectorXd s = x;
  std::sort(s.data(), s.data() + s.size());
  FiveNumberSummary out;
  out.min = s[0];
  out.q1 = quantile_type7_sorted(s, 0.25);
  out.median = quantile_type7_sorted(s, 0.5);
  out.q3 = quantile_type7_sorted(s, 0.75);
  out.max = s[s.size() - 1];
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01, -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // one Halley refinement against the exact CDF
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace amle
