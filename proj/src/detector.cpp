#include "graphdrift/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "graphdrift/errors.hpp"
#include "graphdrift/parallel.hpp"
#include "graphdrift/rng.hpp"
#include "graphdrift/stats.hpp"

namespace graphdrift {

namespace {

constexpr double kMaxCondition = 1e12;

// Inverse through the eigensystem; returns false when the matrix is
// effectively singular.
bool spd_inverse(const Eigen::MatrixXd& m, Eigen::MatrixXd* inverse) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) return false;
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  double lo = lambda.minCoeff();
  double hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) return false;
  *inverse = solver.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
             solver.eigenvectors().transpose();
  return true;
}

}  // namespace

BaselineModel fit_baseline(const Eigen::MatrixXd& reference, int window_size, double ridge) {
  const Eigen::Index dim = reference.rows();
  const Eigen::Index count = reference.cols();
  if (dim < 1) throw std::invalid_argument("fit_baseline: empty embeddings");
  if (window_size < 1) throw std::invalid_argument("fit_baseline: window_size must be >= 1");
  if (count < dim + 2)
    throw std::invalid_argument("fit_baseline: reference sample needs at least dim + 2 vectors");

  BaselineModel model;
  model.window_size = window_size;
  model.mean0 = reference.rowwise().mean();
  Eigen::MatrixXd centered = reference.colwise() - model.mean0;
  model.covariance = centered * centered.transpose() / static_cast<double>(count - 1);
  model.scale = 1.0 / static_cast<double>(count) + 1.0 / static_cast<double>(window_size);

  Eigen::MatrixXd sigma = model.scale * model.covariance;
  if (!spd_inverse(sigma, &model.sigma_inverse)) {
    double bump = ridge * model.covariance.trace() / static_cast<double>(dim);
    Eigen::MatrixXd shrunk = (1.0 - ridge) * model.covariance;
    shrunk.diagonal().array() += bump;
    model.covariance = shrunk;
    model.shrunk = true;
    sigma = model.scale * model.covariance;
    if (!spd_inverse(sigma, &model.sigma_inverse))
      throw DegeneratePrototypesError(
          "fit_baseline: covariance is singular even after shrinkage");
  }
  return model;
}

double window_statistic(const BaselineModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& window) {
  if (window.rows() != model.dim())
    throw std::invalid_argument("window_statistic: dimension mismatch");
  if (window.cols() != model.window_size)
    throw std::invalid_argument("window_statistic: window must hold window_size vectors");
  Eigen::VectorXd diff = model.mean0 - window.rowwise().mean();
  double sq = diff.dot(model.sigma_inverse * diff);
  return std::sqrt(std::max(0.0, sq));
}

double default_offset(int dof) {
  return std::sqrt(chi_squared_quantile(dof, 0.75));
}

double ThresholdTable::at(long position) const {
  if (position < 1) throw std::invalid_argument("ThresholdTable::at: positions are 1-based");
  if (h.empty()) throw std::invalid_argument("ThresholdTable::at: empty table");
  std::size_t idx = static_cast<std::size_t>(position - 1);
  if (idx >= h.size()) idx = h.size() - 1;
  return h[idx];
}

namespace {

// Shared calibration loop. draw(rng) yields one statistic sample; exactly
// one draw per trajectory per step keeps the result independent of the
// thread split.
template <typename Draw>
ThresholdTable calibrate_core(int dof, double q, int arl0_target, long num_sims,
                              std::uint64_t seed, long horizon, int threads,
                              const Draw& draw) {
  if (arl0_target < 2) throw std::invalid_argument("calibrate: arl0_target must be >= 2");
  double alpha = 1.0 / static_cast<double>(arl0_target);
  long floor_sims = std::max<long>(10000, static_cast<long>(std::ceil(100.0 / alpha)));
  if (num_sims < floor_sims)
    throw InsufficientSimulationsError(
        "calibrate: need at least max(1e4, 100/alpha) simulated trajectories");
  if (horizon <= 0) horizon = 20L * arl0_target;

  ThresholdTable table;
  table.dof = dof;
  table.arl0_target = arl0_target;
  table.alpha = alpha;
  table.q = q;
  table.num_sims = num_sims;
  table.seed = seed;
  table.h.reserve(static_cast<std::size_t>(horizon));

  std::vector<SplitMix64> rng;
  rng.reserve(static_cast<std::size_t>(num_sims));
  for (long i = 0; i < num_sims; ++i)
    rng.emplace_back(derive_seed(seed, seed_tag::kCalibration, static_cast<std::uint64_t>(i)));
  std::vector<double> cusum(static_cast<std::size_t>(num_sims), 0.0);
  std::vector<double> scratch(static_cast<std::size_t>(num_sims));

  const std::size_t n = static_cast<std::size_t>(num_sims);
  for (long w = 0; w < horizon; ++w) {
    parallel_for(n, threads, [&](std::size_t i) {
      double s = draw(rng[i]);
      cusum[i] = std::max(0.0, cusum[i] + (s - q));
    });
    std::copy(cusum.begin(), cusum.end(), scratch.begin());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    std::nth_element(scratch.begin(), scratch.begin() + (rank - 1), scratch.end());
    double hw = scratch[rank - 1];
    table.h.push_back(hw);
    // Trajectories above the threshold alarm; their replacements restart
    // from zero so the population size never shrinks.
    parallel_for(n, threads, [&](std::size_t i) {
      if (cusum[i] > hw) cusum[i] = 0.0;
    });
  }
  return table;
}

}  // namespace

ThresholdTable calibrate_thresholds(int dof, int arl0_target, long num_sims,
                                    std::uint64_t seed, long horizon, int threads) {
  if (dof < 1) throw std::invalid_argument("calibrate_thresholds: dof must be >= 1");
  return calibrate_core(dof, default_offset(dof), arl0_target, num_sims, seed, horizon,
                        threads, [dof](SplitMix64& rng) {
                          return std::sqrt(rng.next_chi_squared(dof));
                        });
}

ThresholdTable calibrate_thresholds_empirical(const std::vector<double>& pool,
                                              int arl0_target, long num_sims,
                                              std::uint64_t seed, long horizon,
                                              int threads) {
  if (pool.size() < 2)
    throw std::invalid_argument("calibrate_thresholds_empirical: pool too small");
  double q = upper_order_quantile(pool, 0.75);
  const std::size_t size = pool.size();
  const double* data = pool.data();
  return calibrate_core(0, q, arl0_target, num_sims, seed, horizon, threads,
                        [data, size](SplitMix64& rng) {
                          return data[rng.next_below(size)];
                        });
}

bool cusum_step(DetectorState& state, double s, double h, double q) {
  state.cusum = std::max(0.0, state.cusum + (s - q));
  state.position += 1;
  state.windows_seen += 1;
  if (state.cusum > h) {
    state.alarms.push_back(state.windows_seen);
    state.cusum = 0.0;
    state.position = 0;
    return true;
  }
  return false;
}

std::vector<long> run_detector(const Eigen::MatrixXd& stream, const BaselineModel& model,
                               const ThresholdTable& table, DetectorTrace* trace) {
  if (stream.rows() != model.dim())
    throw std::invalid_argument("run_detector: stream dimension mismatch");
  const long n = model.window_size;
  const long windows = static_cast<long>(stream.cols()) / n;
  DetectorState state;
  for (long w = 0; w < windows; ++w) {
    double s = window_statistic(model, stream.middleCols(w * n, n));
    double h = table.at(state.position + 1);
    cusum_step(state, s, h, table.q);
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
