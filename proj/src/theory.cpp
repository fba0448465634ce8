#include "graphdrift/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "graphdrift/errors.hpp"
#include "graphdrift/rng.hpp"
#include "graphdrift/stats.hpp"

namespace graphdrift {

namespace {

// Eigendecomposition of a covariance that must be positive definite.
// Keeping the factors around lets us evaluate Mahalanobis gaps without
// forming the inverse.
struct SpdFactors {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;  // ascending

  double mahalanobis(const Eigen::VectorXd& delta) const {
    Eigen::VectorXd proj = vectors.transpose() * delta;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      acc += proj(i) * proj(i) / values(i);
    return std::sqrt(std::max(0.0, acc));
  }
};

SpdFactors factor_spd(const Eigen::MatrixXd& sigma, const char* what) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw std::invalid_argument(std::string(what) + ": covariance must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success)
    throw std::invalid_argument(std::string(what) + ": eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  if (values(0) <= values(values.size() - 1) * 1e-14 || values(0) <= 0.0)
    throw std::invalid_argument(std::string(what) + ": covariance is singular");
  return SpdFactors{solver.eigenvectors(), values};
}

}  // namespace

BoundReport check_embedding_lower_bound(const std::vector<GraphPair>& pairs,
                                        const PrototypeSet& prototypes,
                                        const Eigen::MatrixXd& sigma,
                                        const DistanceFn& distance, double slack) {
  const std::size_t m = prototypes.prototypes.size();
  if (m == 0) throw std::invalid_argument("check_embedding_lower_bound: no prototypes");
  if (static_cast<std::size_t>(sigma.rows()) != m)
    throw std::invalid_argument(
        "check_embedding_lower_bound: covariance size does not match prototypes");
  SpdFactors factors = factor_spd(sigma, "check_embedding_lower_bound");
  const double lambda_min = factors.values(0);
  const double factor = std::sqrt(lambda_min / static_cast<double>(m));

  BoundReport report;
  report.bound_name = "embedding_lower_bound";
  for (const GraphPair& pair : pairs) {
    double d = distance(pair.first, pair.second);
    Eigen::VectorXd delta = embed(pair.first, prototypes, distance) -
                            embed(pair.second, prototypes, distance);
    double rhs = factor * factors.mahalanobis(delta);
    ++report.pairs_tested;
    if (d < rhs - slack * (1.0 + rhs)) ++report.violations;
  }
  report.constants["lambda_min"] = lambda_min;
  report.constants["lambda_max"] = factors.values(factors.values.size() - 1);
  report.constants["M"] = static_cast<double>(m);
  report.constants["c"] = factor;
  return report;
}

BoundReport check_embedding_norm_chain(const std::vector<GraphPair>& pairs,
                                       const PrototypeSet& prototypes,
                                       const DistanceFn& distance, double slack) {
  const std::size_t m = prototypes.prototypes.size();
  if (m == 0) throw std::invalid_argument("check_embedding_norm_chain: no prototypes");
  const double root_m = std::sqrt(static_cast<double>(m));

  BoundReport report;
  report.bound_name = "embedding_norm_chain";
  for (const GraphPair& pair : pairs) {
    double d = distance(pair.first, pair.second);
    Eigen::VectorXd delta = embed(pair.first, prototypes, distance) -
                            embed(pair.second, prototypes, distance);
    double inf_norm = delta.cwiseAbs().maxCoeff();
    double two_norm = delta.norm();
    ++report.pairs_tested;
    bool ok = d >= inf_norm - slack * (1.0 + inf_norm) &&
              inf_norm >= two_norm / root_m - slack * (1.0 + two_norm);
    if (!ok) ++report.violations;
  }
  report.constants["M"] = static_cast<double>(m);
  return report;
}

BoundReport check_identified_bilipschitz(const std::vector<IdentifiedPair>& pairs,
                                         const std::vector<IdentifiedGraph>& prototypes,
                                         const ScalingModel& scaling,
                                         const Eigen::MatrixXd& sigma, double slack) {
  const std::size_t m = prototypes.size();
  if (m < 2)
    throw std::invalid_argument("check_identified_bilipschitz: need at least 2 prototypes");
  if (scaling.x.cols() != static_cast<Eigen::Index>(m))
    throw std::invalid_argument(
        "check_identified_bilipschitz: scaling has wrong prototype count");
  if (sigma.rows() != scaling.x.rows())
    throw std::invalid_argument(
        "check_identified_bilipschitz: covariance size does not match configuration");

  Eigen::MatrixXd gram = scaling.x * scaling.x.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_solver(gram);
  if (gram_solver.info() != Eigen::Success)
    throw GeometryError("check_identified_bilipschitz: configuration eigensolve failed");
  const Eigen::VectorXd& gram_values = gram_solver.eigenvalues();  // ascending
  double xxt_min = gram_values(0);
  double xxt_max = gram_values(gram_values.size() - 1);
  if (xxt_min <= xxt_max * 1e-14 || xxt_min <= 0.0)
    throw GeometryError("check_identified_bilipschitz: configuration is rank deficient");

  SpdFactors factors = factor_spd(sigma, "check_identified_bilipschitz");
  const double c = std::sqrt(factors.values(0)) / (2.0 * xxt_max);
  const double big_c = std::sqrt(factors.values(factors.values.size() - 1)) / (2.0 * xxt_min);

  auto transform = [&](const IdentifiedGraph& g) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
      y(static_cast<Eigen::Index>(j)) = frobenius_distance(g, prototypes[j]);
    return u_transform(y, scaling);
  };

  BoundReport report;
  report.bound_name = "identified_bilipschitz";
  for (const IdentifiedPair& pair : pairs) {
    double df = frobenius_distance(pair.first, pair.second);
    double dsig = factors.mahalanobis(transform(pair.first) - transform(pair.second));
    ++report.pairs_tested;
    bool lower_ok = c * dsig <= df + slack * (1.0 + df);
    bool upper_ok = df <= big_c * dsig + slack * (1.0 + big_c * dsig);
    if (!lower_ok || !upper_ok) ++report.violations;
  }
  report.constants["c"] = c;
  report.constants["C"] = big_c;
  report.constants["lambda_min"] = factors.values(0);
  report.constants["lambda_max"] = factors.values(factors.values.size() - 1);
  report.constants["xxt_min"] = xxt_min;
  report.constants["xxt_max"] = xxt_max;
  report.constants["M"] = static_cast<double>(m);
  return report;
}

FrechetReport check_frechet_euclidean(int n, int dim, int trials, std::uint64_t seed,
                                      int candidates) {
  if (n < 1 || dim < 1 || trials < 1 || candidates < 1)
    throw std::invalid_argument("check_frechet_euclidean: all counts must be positive");

  FrechetReport report;
  report.trials = trials;
  report.expected_mean_variation =
      (1.0 - 1.0 / static_cast<double>(n)) * static_cast<double>(dim);

  std::vector<double> variations;
  variations.reserve(static_cast<std::size_t>(trials));
  Eigen::MatrixXd points(dim, n);
  Eigen::VectorXd candidate(dim);
  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng(derive_seed(seed, seed_tag::kTheory, static_cast<std::uint64_t>(trial)));
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      for (Eigen::Index i = 0; i < points.rows(); ++i) points(i, j) = rng.next_normal();
    Eigen::VectorXd mean = points.rowwise().mean();
    double best = (points.colwise() - mean).squaredNorm() / static_cast<double>(n);
    variations.push_back(best);

    // Challengers concentrate around the mean at radii from 1e-4 to 10 so the
    // minimiser property is probed where rounding could plausibly break it.
    for (int k = 0; k < candidates; ++k) {
      double radius = std::pow(10.0, -4.0 + 5.0 * rng.next_unit_co());
      for (Eigen::Index i = 0; i < candidate.size(); ++i) candidate(i) = rng.next_normal();
      double norm = candidate.norm();
      if (norm == 0.0) continue;
      candidate = mean + (radius / norm) * candidate;
      double value =
          (points.colwise() - candidate).squaredNorm() / static_cast<double>(n);
      if (value < best - 1e-12) ++report.minimizer_failures;
    }
  }

  report.observed_mean_variation = mean_of(variations);
  double se = stddev_of(variations) / std::sqrt(static_cast<double>(trials));
  report.standard_error = se;
  double gap = std::abs(report.observed_mean_variation - report.expected_mean_variation);
  report.identity_within_tolerance = gap <= 3.0 * se + 1e-12;
  return report;
}

double graph_frechet_variation(const std::vector<AttributedGraph>& sample,
                               const DistanceFn& distance, std::size_t* medoid) {
  if (sample.empty())
    throw std::invalid_argument("graph_frechet_variation: empty sample");
  const std::size_t n = sample.size();
  Eigen::MatrixXd squared(n, n);
  squared.setZero();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distance(sample[i], sample[j]);
      squared(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d * d;
      squared(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d * d;
    }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double value = squared.col(static_cast<Eigen::Index>(j)).mean();
    if (value < best) {
      best = value;
      best_index = j;
    }
  }
  if (medoid) *medoid = best_index;
  return best;
}

double estimate_v2(const std::vector<AttributedGraph>& sample,
                   const PrototypeSet& prototypes, const DistanceFn& distance) {
  if (sample.size() < 5)
    throw std::invalid_argument("estimate_v2: need at least 5 sample graphs");
  double graph_variation = graph_frechet_variation(sample, distance);
  Eigen::MatrixXd y = embed_all(sample, prototypes, distance);
  Eigen::VectorXd mean = y.rowwise().mean();
  double embedded_variation =
      (y.colwise() - mean).squaredNorm() / static_cast<double>(sample.size());
  return static_cast<double>(prototypes.prototypes.size()) * graph_variation -
         0.5 * embedded_variation;
}

BoundReport check_v2_markov(const std::vector<AttributedGraph>& sample,
                            const PrototypeSet& prototypes, const DistanceFn& distance,
                            int resamples, std::uint64_t seed,
                            std::vector<double> delta_grid) {
  if (sample.size() < 5)
    throw std::invalid_argument("check_v2_markov: need at least 5 sample graphs");
  if (resamples < 1)
    throw std::invalid_argument("check_v2_markov: need at least one resample");
  const std::size_t n = sample.size();
  const double m = static_cast<double>(prototypes.prototypes.size());

  // Everything a resample needs is index arithmetic over these two tables.
  Eigen::MatrixXd squared(n, n);
  squared.setZero();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distance(sample[i], sample[j]);
      squared(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d * d;
      squared(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d * d;
    }
  Eigen::MatrixXd y = embed_all(sample, prototypes, distance);

  Eigen::VectorXd sample_mean = y.rowwise().mean();
  double embedded_variation =
      (y.colwise() - sample_mean).squaredNorm() / static_cast<double>(n);
  double graph_variation = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    graph_variation =
        std::min(graph_variation, squared.col(static_cast<Eigen::Index>(j)).mean());
  double v2 = m * graph_variation - 0.5 * embedded_variation;

  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(resamples));
  std::vector<std::size_t> draw(n);
  for (int r = 0; r < resamples; ++r) {
    SplitMix64 rng(derive_seed(seed, seed_tag::kTheory, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(y.rows());
    for (std::size_t t = 0; t < n; ++t) {
      draw[t] = static_cast<std::size_t>(rng.next_below(n));
      mean += y.col(static_cast<Eigen::Index>(draw[t]));
    }
    mean /= static_cast<double>(n);
    // Medoid of the resample: the member minimising the mean squared distance
    // to the drawn multiset.
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = draw[0];
    for (std::size_t candidate_slot = 0; candidate_slot < n; ++candidate_slot) {
      std::size_t candidate = draw[candidate_slot];
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t)
        acc += squared(static_cast<Eigen::Index>(draw[t]),
                       static_cast<Eigen::Index>(candidate));
      if (acc < best) {
        best = acc;
        best_index = candidate;
      }
    }
    gaps.push_back((mean - y.col(static_cast<Eigen::Index>(best_index))).squaredNorm());
  }

  if (delta_grid.empty()) {
    if (v2 > 0.0)
      for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) delta_grid.push_back(scale * v2);
    else
      delta_grid.push_back(1e-12);
  }

  BoundReport report;
  report.bound_name = "v2_markov";
  for (double delta : delta_grid) {
    if (delta <= 0.0) throw std::invalid_argument("check_v2_markov: deltas must be positive");
    long exceed = static_cast<long>(
        std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g >= delta; }));
    double frequency = static_cast<double>(exceed) / static_cast<double>(resamples);
    ++report.pairs_tested;
    if (frequency > v2 / delta) ++report.violations;
  }
  report.constants["v2_estimate"] = v2;
  report.constants["M"] = m;
  report.constants["resamples"] = static_cast<double>(resamples);
  return report;
}

}  // namespace graphdrift
