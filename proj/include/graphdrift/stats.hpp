#pragma once

#include <cstdint>
#include <vector>

namespace graphdrift {

// Quantile function of the chi-squared distribution with `dof` degrees of
// freedom at probability p in (0,1).
double chi_squared_quantile(int dof, double p);

// CDF counterpart, used by goodness-of-fit checks.
double chi_squared_cdf(int dof, double x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Clopper-Pearson exact two-sided confidence interval for a binomial rate.
Interval clopper_pearson(long successes, long trials, double confidence = 0.95);

// Percentile bootstrap confidence interval for the mean of `values`.
Interval bootstrap_mean_ci(const std::vector<double>& values, int resamples,
                           std::uint64_t seed, double confidence = 0.95);

double mean_of(const std::vector<double>& values);
double stddev_of(const std::vector<double>& values);  // unbiased, 0 for size < 2

// Empirical upper quantile via the ceil(p*n)-th order statistic (1-based).
// Matches the convention used by the threshold calibration.
double upper_order_quantile(std::vector<double> values, double p);

}  // namespace graphdrift
