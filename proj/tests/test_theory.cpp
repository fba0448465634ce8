#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "graphdrift/errors.hpp"
#include "graphdrift/ged.hpp"
#include "graphdrift/rng.hpp"
#include "graphdrift/theory.hpp"
#include "support.hpp"

using namespace graphdrift;
using testsupport::complete_graph;
using testsupport::one_vertex;
using testsupport::path_graph;

namespace {

DistanceFn exact_distance(const CostModel& cost) {
  return [cost](const AttributedGraph& a, const AttributedGraph& b) {
    return exact_ged(a, b, cost);
  };
}

DistanceFn bipartite_distance(const CostModel& cost) {
  return [cost](const AttributedGraph& a, const AttributedGraph& b) {
    return bipartite_ged(a, b, cost);
  };
}

Eigen::MatrixXd covariance_of(const Eigen::MatrixXd& columns) {
  Eigen::VectorXd mean = columns.rowwise().mean();
  Eigen::MatrixXd centered = columns.colwise() - mean;
  return centered * centered.transpose() / static_cast<double>(columns.cols() - 1);
}

IdentifiedGraph random_identified(SplitMix64& rng, std::size_t n) {
  Eigen::MatrixXd w(n, n);
  w.setZero();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double value = rng.next_unit_co();
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  return IdentifiedGraph(w);
}

}  // namespace

TEST_CASE("embedding lower bound and norm chain hold with the exact metric") {
  SplitMix64 rng(71);
  CostModel cost;
  DistanceFn dist = exact_distance(cost);

  std::vector<AttributedGraph> training;
  for (int i = 0; i < 30; ++i)
    training.push_back(testsupport::random_graph(rng, 3, 5, 0.4,
                                                 testsupport::AttrFlavour::planar2d));
  PrototypeSet prototypes = k_centres(training, 4, dist, 3, 17);
  Eigen::MatrixXd sigma = covariance_of(embed_all(training, prototypes, dist));

  std::vector<GraphPair> pairs;
  for (int i = 0; i < 60; ++i)
    pairs.emplace_back(
        testsupport::random_graph(rng, 3, 5, 0.4, testsupport::AttrFlavour::planar2d),
        testsupport::random_graph(rng, 3, 5, 0.4, testsupport::AttrFlavour::planar2d));
  pairs.emplace_back(training[0], training[0]);  // d = 0 must still satisfy 0 >= 0

  BoundReport lower = check_embedding_lower_bound(pairs, prototypes, sigma, dist);
  CHECK(lower.pairs_tested == 61);
  CHECK(lower.violations == 0);
  CHECK(lower.constants.at("lambda_min") > 0.0);
  CHECK(lower.constants.at("M") == doctest::Approx(4.0));
  CHECK(lower.constants.at("c") ==
        doctest::Approx(std::sqrt(lower.constants.at("lambda_min") / 4.0)));

  BoundReport chain = check_embedding_norm_chain(pairs, prototypes, dist);
  CHECK(chain.pairs_tested == 61);
  CHECK(chain.violations == 0);

  // The assignment-based upper bound is not a metric, so its report is a
  // diagnostic: the count is whatever it is, only the bookkeeping is checked.
  BoundReport audit =
      check_embedding_lower_bound(pairs, prototypes, sigma, bipartite_distance(cost));
  CHECK(audit.pairs_tested == 61);
  CHECK(audit.violations >= 0);
  CHECK(audit.violations <= audit.pairs_tested);
}

TEST_CASE("embedding lower bound rejects bad covariances") {
  SplitMix64 rng(72);
  CostModel cost;
  DistanceFn dist = exact_distance(cost);
  std::vector<AttributedGraph> training;
  for (int i = 0; i < 10; ++i)
    training.push_back(testsupport::random_graph(rng, 3, 4, 0.4,
                                                 testsupport::AttrFlavour::planar2d));
  PrototypeSet prototypes = k_centres(training, 3, dist, 2, 17);
  std::vector<GraphPair> pairs{{training[0], training[1]}};

  CHECK_THROWS_AS(check_embedding_lower_bound(pairs, prototypes,
                                              Eigen::MatrixXd::Ones(3, 3), dist),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_embedding_lower_bound(pairs, prototypes,
                                              Eigen::MatrixXd::Identity(5, 5), dist),
                  std::invalid_argument);
}

TEST_CASE("identified graphs satisfy the two-sided bilipschitz bound") {
  SplitMix64 rng(73);
  const std::size_t universe = 6;

  std::vector<IdentifiedGraph> prototypes;
  for (int i = 0; i < 20; ++i) prototypes.push_back(random_identified(rng, universe));
  Eigen::MatrixXd pairwise(20, 20);
  pairwise.setZero();
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j) {
      double d = frobenius_distance(prototypes[static_cast<std::size_t>(i)],
                                    prototypes[static_cast<std::size_t>(j)]);
      pairwise(i, j) = d;
      pairwise(j, i) = d;
    }
  ScalingModel scaling = classical_scaling(pairwise);
  // 6 identified vertices with symmetric zero-diagonal weights span 15 dims.
  CHECK(scaling.x.rows() == 15);

  auto transform = [&](const IdentifiedGraph& g) {
    Eigen::VectorXd y(20);
    for (int j = 0; j < 20; ++j)
      y(j) = frobenius_distance(g, prototypes[static_cast<std::size_t>(j)]);
    return u_transform(y, scaling);
  };
  Eigen::MatrixXd u_sample(15, 200);
  for (int i = 0; i < 200; ++i) u_sample.col(i) = transform(random_identified(rng, universe));
  Eigen::MatrixXd sigma = covariance_of(u_sample);

  std::vector<IdentifiedPair> pairs;
  for (int i = 0; i < 100; ++i)
    pairs.emplace_back(random_identified(rng, universe), random_identified(rng, universe));
  pairs.emplace_back(prototypes[0], prototypes[0]);

  BoundReport report = check_identified_bilipschitz(pairs, prototypes, scaling, sigma);
  CHECK(report.pairs_tested == 101);
  CHECK(report.violations == 0);
  CHECK(report.constants.at("c") > 0.0);
  CHECK(report.constants.at("C") >= report.constants.at("c"));

  // Scaling the covariance by 9 scales both constants by 3 and cannot create
  // violations, because the Mahalanobis gap shrinks by the same factor.
  BoundReport scaled = check_identified_bilipschitz(pairs, prototypes, scaling,
                                                    Eigen::MatrixXd(9.0 * sigma));
  CHECK(scaled.violations == 0);
  CHECK(scaled.constants.at("c") == doctest::Approx(3.0 * report.constants.at("c")));
  CHECK(scaled.constants.at("C") == doctest::Approx(3.0 * report.constants.at("C")));
}

TEST_CASE("bilipschitz check rejects degenerate inputs") {
  SplitMix64 rng(74);
  std::vector<IdentifiedGraph> prototypes;
  for (int i = 0; i < 3; ++i) prototypes.push_back(random_identified(rng, 3));

  ScalingModel flat;
  flat.x = Eigen::MatrixXd::Zero(2, 3);
  flat.x(0, 0) = 1.0;
  flat.x(0, 1) = -1.0;  // second row identically zero, so XX^T is singular
  flat.eigenvalues = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(check_identified_bilipschitz({}, prototypes, flat,
                                               Eigen::MatrixXd::Identity(2, 2)),
                  GeometryError);

  ScalingModel wrong;
  wrong.x = Eigen::MatrixXd::Identity(2, 2);
  wrong.eigenvalues = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(check_identified_bilipschitz({}, prototypes, wrong,
                                               Eigen::MatrixXd::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("euclidean mean minimises the sample variation and matches its expectation") {
  FrechetReport single = check_frechet_euclidean(1, 2, 100, 9, 10);
  CHECK(single.minimizer_failures == 0);
  CHECK(single.observed_mean_variation == doctest::Approx(0.0));
  CHECK(single.expected_mean_variation == doctest::Approx(0.0));
  CHECK(single.identity_within_tolerance);

  FrechetReport pairs = check_frechet_euclidean(2, 1, 10000, 9, 1000);
  CHECK(pairs.minimizer_failures == 0);
  CHECK(pairs.expected_mean_variation == doctest::Approx(0.5));
  CHECK(pairs.identity_within_tolerance);
  CHECK(std::abs(pairs.observed_mean_variation - 0.5) <= 3.0 * pairs.standard_error);

  FrechetReport wide = check_frechet_euclidean(5, 3, 4000, 10, 200);
  CHECK(wide.minimizer_failures == 0);
  CHECK(wide.expected_mean_variation == doctest::Approx(2.4));
  CHECK(wide.identity_within_tolerance);

  CHECK_THROWS_AS(check_frechet_euclidean(0, 1, 10, 9), std::invalid_argument);
  CHECK_THROWS_AS(check_frechet_euclidean(2, 1, 0, 9), std::invalid_argument);
}

TEST_CASE("graph variation medoid search on hand-checkable samples") {
  CostModel cost;
  DistanceFn dist = exact_distance(cost);

  std::vector<AttributedGraph> identical(6, path_graph(3));
  CHECK(graph_frechet_variation(identical, dist) == doctest::Approx(0.0));

  // Two paths and a triangle: the triangle differs by one edge operation, so
  // column means of squared distances are 1/3, 1/3, 2/3.
  std::vector<AttributedGraph> mixed{path_graph(3), path_graph(3), complete_graph(3)};
  std::size_t medoid = 99;
  CHECK(graph_frechet_variation(mixed, dist, &medoid) == doctest::Approx(1.0 / 3.0));
  CHECK(medoid == 0);

  CHECK_THROWS_AS(graph_frechet_variation({}, dist), std::invalid_argument);
}

TEST_CASE("variation gap constant on a two-type sample") {
  CostModel cost;  // unit operations: the two symbols are one substitution apart
  DistanceFn dist = exact_distance(cost);

  std::vector<AttributedGraph> sample;
  for (int i = 0; i < 10; ++i) sample.push_back(one_vertex("A"));
  for (int i = 0; i < 10; ++i) sample.push_back(one_vertex("B"));

  PrototypeSet single;
  single.prototypes.push_back(one_vertex("A"));
  single.source_indices.push_back(0);
  single.pairwise = Eigen::MatrixXd::Zero(1, 1);

  // Graph variation 1/2, embedded variation 1/4, so the gap constant is
  // 1 * 1/2 - (1/2) * 1/4 = 3/8.
  CHECK(estimate_v2(sample, single, dist) == doctest::Approx(3.0 / 8.0));

  std::vector<AttributedGraph> identical(6, one_vertex("A"));
  CHECK(estimate_v2(identical, single, dist) == doctest::Approx(0.0));

  std::vector<AttributedGraph> tiny(4, one_vertex("A"));
  CHECK_THROWS_AS(estimate_v2(tiny, single, dist), std::invalid_argument);
}

TEST_CASE("markov tail bound holds on bootstrap resamples") {
  SplitMix64 rng(75);
  CostModel cost;
  DistanceFn dist = exact_distance(cost);
  std::vector<AttributedGraph> sample;
  for (int i = 0; i < 20; ++i)
    sample.push_back(testsupport::random_graph(rng, 3, 4, 0.4,
                                               testsupport::AttrFlavour::planar2d));
  PrototypeSet prototypes = k_centres(sample, 3, dist, 3, 21);

  BoundReport report = check_v2_markov(sample, prototypes, dist, 1000, 5);
  CHECK(report.pairs_tested == 6);  // default grid of v2 multiples
  CHECK(report.violations == 0);
  CHECK(report.constants.at("v2_estimate") >= 0.0);

  BoundReport again = check_v2_markov(sample, prototypes, dist, 1000, 5);
  CHECK(again.violations == report.violations);
  CHECK(again.constants.at("v2_estimate") ==
        doctest::Approx(report.constants.at("v2_estimate")));

  CHECK_THROWS_AS(check_v2_markov(sample, prototypes, dist, 1000, 5, {-1.0}),
                  std::invalid_argument);
  std::vector<AttributedGraph> tiny(4, path_graph(2));
  CHECK_THROWS_AS(check_v2_markov(tiny, prototypes, dist, 10, 5), std::invalid_argument);
}
