#pragma once

#include <cstdint>
#include <vector>

#include "graphdrift/detector.hpp"
#include "graphdrift/graph.hpp"

namespace graphdrift {

// Scalar summaries used by the single-feature reference detectors.
enum class ScalarFeature { edge_density, spectral_gap };

// Fraction of ordered vertex pairs carrying an edge: |E| / (|V| (|V|-1)).
// Undirected graphs thus range over [0, 1/2]. Graphs with fewer than two
// vertices have no pairs and are rejected.
double edge_density(const AttributedGraph& g);

// Difference between the two largest Laplacian eigenvalues of the
// undirected skeleton. Edgeless graphs give 0.
double spectral_gap(const AttributedGraph& g);

double scalar_feature(ScalarFeature feature, const AttributedGraph& g);

// Per-graph detector on |feature - training mean| with unit windows;
// thresholds come from resampling the training residuals.
struct ScalarBaselineModel {
  ScalarFeature feature = ScalarFeature::edge_density;
  double expected = 0.0;
  ThresholdTable thresholds;
};

ScalarBaselineModel fit_scalar_baseline(ScalarFeature feature,
                                        const std::vector<AttributedGraph>& training,
                                        int arl0_target, long num_sims,
                                        std::uint64_t seed, long horizon = 0,
                                        int threads = 1);

// Alarms as absolute 1-based time steps (window size is one graph).
std::vector<long> run_scalar_baseline(const std::vector<const AttributedGraph*>& stream,
                                      const ScalarBaselineModel& model,
                                      DetectorTrace* trace = nullptr);

}  // namespace graphdrift
