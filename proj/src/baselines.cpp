#include "graphdrift/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "graphdrift/errors.hpp"

namespace graphdrift {

double edge_density(const AttributedGraph& g) {
  const double n = static_cast<double>(g.num_vertices());
  if (g.num_vertices() < 2)
    throw DegenerateGraphError("edge_density: needs at least two vertices");
  return static_cast<double>(g.num_edges()) / (n * (n - 1.0));
}

double spectral_gap(const AttributedGraph& g) {
  if (g.num_vertices() < 2)
    throw DegenerateGraphError("spectral_gap: needs at least two vertices");
  if (g.num_edges() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_gap: eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();  // ascending, all >= 0
  Eigen::Index last = lambda.size() - 1;
  return lambda(last) - lambda(last - 1);
}

double scalar_feature(ScalarFeature feature, const AttributedGraph& g) {
  switch (feature) {
    case ScalarFeature::edge_density: return edge_density(g);
    case ScalarFeature::spectral_gap: return spectral_gap(g);
  }
  throw std::invalid_argument("scalar_feature: unknown feature");
}

ScalarBaselineModel fit_scalar_baseline(ScalarFeature feature,
                                        const std::vector<AttributedGraph>& training,
                                        int arl0_target, long num_sims,
                                        std::uint64_t seed, long horizon, int threads) {
  if (training.size() < 2)
    throw std::invalid_argument("fit_scalar_baseline: training collection too small");
  ScalarBaselineModel model;
  model.feature = feature;
  std::vector<double> values(training.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    values[i] = scalar_feature(feature, training[i]);
    acc += values[i];
  }
  model.expected = acc / static_cast<double>(training.size());
  // Null statistics are absolute residuals from the training expectation.
  std::vector<double> residuals(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    residuals[i] = std::abs(values[i] - model.expected);
  model.thresholds = calibrate_thresholds_empirical(residuals, arl0_target, num_sims,
                                                    seed, horizon, threads);
  return model;
}

std::vector<long> run_scalar_baseline(const std::vector<const AttributedGraph*>& stream,
                                      const ScalarBaselineModel& model,
                                      DetectorTrace* trace) {
  DetectorState state;
  for (const AttributedGraph* g : stream) {
    double s = std::abs(scalar_feature(model.feature, *g) - model.expected);
    double h = model.thresholds.at(state.position + 1);
    cusum_step(state, s, h, model.thresholds.q);
    if (trace) {
      trace->statistic.push_back(s);
      trace->threshold.push_back(h);
      trace->cusum.push_back(state.cusum);
    }
  }
  if (trace) trace->alarms = state.alarms;
  return state.alarms;
}

}  // namespace graphdrift
