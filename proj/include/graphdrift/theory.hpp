#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphdrift/embedding.hpp"
#include "graphdrift/graph.hpp"

namespace graphdrift {

// Outcome of one empirical bound check over a batch of pairs.
struct BoundReport {
  std::string bound_name;
  long pairs_tested = 0;
  long violations = 0;
  std::map<std::string, double> constants;
};

using GraphPair = std::pair<AttributedGraph, AttributedGraph>;
using IdentifiedPair = std::pair<IdentifiedGraph, IdentifiedGraph>;

// Distance domination of the Mahalanobis gap between embeddings:
//   d(g, f) >= sqrt(lambda_min(sigma) / M) * d_sigma(z(g), z(f)).
// Holds whenever `distance` obeys the triangle inequality; sigma must be
// positive definite. `slack` absorbs floating-point rounding.
BoundReport check_embedding_lower_bound(const std::vector<GraphPair>& pairs,
                                        const PrototypeSet& prototypes,
                                        const Eigen::MatrixXd& sigma,
                                        const DistanceFn& distance,
                                        double slack = 1e-9);

// Norm chain on the embedding difference dz = z(g) - z(f):
//   d(g, f) >= ||dz||_inf >= ||dz||_2 / sqrt(M).
BoundReport check_embedding_norm_chain(const std::vector<GraphPair>& pairs,
                                       const PrototypeSet& prototypes,
                                       const DistanceFn& distance,
                                       double slack = 1e-9);

// Two-sided bilipschitz relation for identified graphs. With u the centred
// quadratic transform of the distances to the scaled prototypes,
//   c * d_sigma(u1, u2) <= d_F(g1, g2) <= C * d_sigma(u1, u2),
// where c = sqrt(lambda_min(sigma)) / (2 lambda_max(XX^T)) and
// C = sqrt(lambda_max(sigma)) / (2 lambda_min(XX^T)). Requires every graph
// to live in the affine span of the prototype matrices (automatic once the
// prototypes span the full weight space).
BoundReport check_identified_bilipschitz(const std::vector<IdentifiedPair>& pairs,
                                         const std::vector<IdentifiedGraph>& prototypes,
                                         const ScalingModel& scaling,
                                         const Eigen::MatrixXd& sigma,
                                         double slack = 1e-9);

// Sanity experiment for the Euclidean mean-and-variation identities:
// (a) the sample mean minimises z -> (1/n) sum_t ||x_t - z||^2 against
//     `candidates` random challengers per trial,
// (b) the mean of the attained minimum over trials matches
//     (1 - 1/n) * dim for standard normal samples within three standard
//     errors.
struct FrechetReport {
  int trials = 0;
  long minimizer_failures = 0;
  double observed_mean_variation = 0.0;
  double expected_mean_variation = 0.0;
  double standard_error = 0.0;
  bool identity_within_tolerance = false;
};

FrechetReport check_frechet_euclidean(int n, int dim, int trials, std::uint64_t seed,
                                      int candidates = 1000);

// Sample variation of a graph collection with the minimiser restricted to
// collection members (a medoid search; exact graph means are intractable).
// medoid, when given, receives the winning member index.
double graph_frechet_variation(const std::vector<AttributedGraph>& sample,
                               const DistanceFn& distance,
                               std::size_t* medoid = nullptr);

// Plug-in constant bounding the squared gap between the mean embedding and
// the embedding of the graph-space mean: M * V[graphs] - V[embeddings] / 2.
// Requires at least 5 sample graphs.
double estimate_v2(const std::vector<AttributedGraph>& sample,
                   const PrototypeSet& prototypes, const DistanceFn& distance);

// Bootstrap audit of the Markov-style tail bound
//   P(||ybar - z(medoid)||^2 >= delta) <= v2 / delta
// over `resamples` draws with replacement. An empty grid defaults to
// multiples of the estimated v2 (a single tiny delta when v2 is zero).
BoundReport check_v2_markov(const std::vector<AttributedGraph>& sample,
                            const PrototypeSet& prototypes, const DistanceFn& distance,
                            int resamples, std::uint64_t seed,
                            std::vector<double> delta_grid = {});

}  // namespace graphdrift
