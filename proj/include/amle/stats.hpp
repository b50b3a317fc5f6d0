#pragma once

#include <Eigen/Dense>

#include <vector>

namespace amle {

/// Sample mean.
double mean(const Eigen::VectorXd& x);

/// Sample standard deviation with divisor n-1.
double sample_sd(const Eigen::VectorXd& x);

/// Type-7 quantile (linear interpolation between order statistics) of an
/// unsorted sample; q in [0, 1].
double quantile_type7(Eigen::VectorXd x, double q);

/// Type-7 quantile of an already ascending-sorted sample.
double quantile_type7_sorted(const Eigen::VectorXd& sorted, double q);

double median(const Eigen::VectorXd& x);

/// Median absolute deviation about the median (no consistency factor).
double mad(const Eigen::VectorXd& x);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

FiveNumberSummary five_number_summary(const Eigen::VectorXd& x);

/// Standard normal quantile function (Acklam's approximation polished with
/// one Halley step on erfc; |error| < 1e-14 over (0,1)).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace amle
