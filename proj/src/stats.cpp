#include "graphdrift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "graphdrift/rng.hpp"

namespace graphdrift {

double chi_squared_quantile(int dof, double p) {
  if (dof < 1) throw std::invalid_argument("chi_squared_quantile: dof must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chi_squared_quantile: p must be in (0,1)");
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, p);
}

double chi_squared_cdf(int dof, double x) {
  if (dof < 1) throw std::invalid_argument("chi_squared_cdf: dof must be >= 1");
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::cdf(dist, x);
}

Interval clopper_pearson(long successes, long trials, double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("clopper_pearson: need 0 <= successes <= trials, trials > 0");
  double alpha = 1.0 - confidence;
  Interval ci;
  if (successes == 0) {
    ci.lo = 0.0;
  } else {
    boost::math::beta_distribution<double> lo(static_cast<double>(successes),
                                              static_cast<double>(trials - successes + 1));
    ci.lo = boost::math::quantile(lo, alpha / 2.0);
  }
  if (successes == trials) {
    ci.hi = 1.0;
  } else {
    boost::math::beta_distribution<double> hi(static_cast<double>(successes + 1),
                                              static_cast<double>(trials - successes));
    ci.hi = boost::math::quantile(hi, 1.0 - alpha / 2.0);
  }
  return ci;
}

Interval bootstrap_mean_ci(const std::vector<double>& values, int resamples,
                           std::uint64_t seed, double confidence) {
  if (values.empty()) throw std::invalid_argument("bootstrap_mean_ci: empty sample");
  if (resamples < 2) throw std::invalid_argument("bootstrap_mean_ci: need at least 2 resamples");
  SplitMix64 rng(seed);
  std::size_t n = values.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += values[rng.next_below(n)];
    m = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  double alpha = 1.0 - confidence;
  auto pick = [&](double p) {
    double idx = p * static_cast<double>(means.size() - 1);
    std::size_t k = static_cast<std::size_t>(idx);
    double frac = idx - static_cast<double>(k);
    if (k + 1 >= means.size()) return means.back();
    return means[k] * (1.0 - frac) + means[k + 1] * frac;
  };
  return Interval{pick(alpha / 2.0), pick(1.0 - alpha / 2.0)};
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_of: empty sample");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double stddev_of(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double m = mean_of(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double upper_order_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("upper_order_quantile: empty sample");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("upper_order_quantile: p in (0,1)");
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(values.size())));
  if (rank == 0) rank = 1;
  if (rank > values.size()) rank = values.size();
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

}  // namespace graphdrift
