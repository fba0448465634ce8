#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "graphdrift/graph.hpp"

namespace graphdrift {

using DistanceFn = std::function<double(const AttributedGraph&, const AttributedGraph&)>;

// Prototypes picked from a training collection, together with their pairwise
// distances and the covering radius achieved on that collection.
struct PrototypeSet {
  std::vector<AttributedGraph> prototypes;
  std::vector<std::size_t> source_indices;  // positions in the training collection
  Eigen::MatrixXd pairwise;                 // M x M distances between prototypes
  double covering_radius = 0.0;
};

// Map a graph to the vector of its distances to every prototype.
Eigen::VectorXd embed(const AttributedGraph& g, const PrototypeSet& prototypes,
                      const DistanceFn& distance);

// Column i holds the embedding of graphs[i].
Eigen::MatrixXd embed_all(const std::vector<const AttributedGraph*>& graphs,
                          const PrototypeSet& prototypes, const DistanceFn& distance,
                          int threads = 1);
Eigen::MatrixXd embed_all(const std::vector<AttributedGraph>& graphs,
                          const PrototypeSet& prototypes, const DistanceFn& distance,
                          int threads = 1);

// Alternating minimax clustering on a precomputed distance matrix: assign
// points to the nearest centre, recentre each cluster on the point that
// minimises its worst-case distance, repeat to a fixed point. Returns the
// centre indices and covering radius of the best of `repeats` random starts.
struct KCentresResult {
  std::vector<std::size_t> centres;
  double radius = 0.0;
  // Covering radius after each assignment step of the winning start;
  // non-increasing by construction. Kept for diagnostics.
  std::vector<double> objective_trace;
};
KCentresResult k_centres_on_matrix(const Eigen::MatrixXd& pairwise, std::size_t m,
                                   int repeats, std::uint64_t seed);

// Full pipeline: pairwise distances over the training collection (parallel),
// then k_centres_on_matrix.
PrototypeSet k_centres(const std::vector<AttributedGraph>& training, std::size_t m,
                       const DistanceFn& distance, int repeats, std::uint64_t seed,
                       int threads = 1);

// Pairwise distance matrix of a collection (symmetric, zero diagonal).
Eigen::MatrixXd pairwise_distances(const std::vector<AttributedGraph>& graphs,
                                   const DistanceFn& distance, int threads = 1);

// Euclidean configuration recovered from a distance matrix by double
// centering and eigendecomposition. X has one column per input point, k rows.
struct ScalingModel {
  Eigen::MatrixXd x;  // k x M coordinates
  Eigen::VectorXd eigenvalues;  // the k retained eigenvalues, descending
};

// tol is relative to the largest eigenvalue: smaller eigenvalues are treated
// as zero; an eigenvalue below -tol * largest means the input was not
// Euclidean and raises GeometryError. Of the positive spectrum, enough
// leading eigenvalues are kept to cover a 1 - 1e-6 mass fraction.
ScalingModel classical_scaling(const Eigen::MatrixXd& pairwise, double tol = 1e-9);

// Linearisation of a squared-dissimilarity vector against the scaled
// configuration: u = X * J * (y .^ 2) with J the centering projector.
Eigen::VectorXd u_transform(const Eigen::VectorXd& y, const ScalingModel& scaling);

}  // namespace graphdrift
