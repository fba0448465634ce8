#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace graphdrift {

// Null model of the windowed embedding stream, fitted on a reference sample.
// sigma_inverse is the inverse of scale * covariance, where scale accounts
// for the estimation error of both the reference mean and a window mean.
struct BaselineModel {
  Eigen::VectorXd mean0;
  Eigen::MatrixXd covariance;      // unbiased sample covariance
  double scale = 0.0;              // 1/reference_size + 1/window_size
  Eigen::MatrixXd sigma_inverse;
  int window_size = 0;
  bool shrunk = false;             // covariance needed diagonal shrinkage

  Eigen::Index dim() const { return mean0.size(); }
};

// reference holds one embedding per column. Requires at least dim + 2
// columns. A covariance with condition number above 1e12 is blended with
// ridge * trace/dim on the diagonal once; if that still fails the reference
// sample is rejected.
BaselineModel fit_baseline(const Eigen::MatrixXd& reference, int window_size,
                           double ridge = 1e-6);

// Mahalanobis distance of the window mean from the reference mean; the
// window must have exactly window_size columns.
double window_statistic(const BaselineModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& window);

// Offset subtracted from every statistic before accumulation: the third
// quartile of the statistic's asymptotic null distribution, so the
// accumulator drifts down three quarters of the time under the null.
double default_offset(int dof);

// Per-position alarm thresholds estimated by Monte Carlo under the null.
// Position w (1-based) uses h[w-1]; past the horizon the last value holds.
struct ThresholdTable {
  int dof = 0;           // chi-square dof for the parametric null, 0 = empirical
  int arl0_target = 0;
  double alpha = 0.0;
  double q = 0.0;        // offset the table was calibrated with
  long num_sims = 0;
  std::uint64_t seed = 0;
  std::vector<double> h;

  double at(long position) const;  // 1-based
};

// Thresholds for the parametric null where the squared statistic is
// chi-squared with dof degrees of freedom. horizon <= 0 selects 20 * arl0.
// Simulated populations keep their size constant: a trajectory that crosses
// the current threshold is replaced by a fresh restart at zero.
ThresholdTable calibrate_thresholds(int dof, int arl0_target, long num_sims,
                                    std::uint64_t seed, long horizon = 0,
                                    int threads = 1);

// Same machinery with statistics resampled from an observed pool (scalar
// feature residuals); the offset becomes the pool's third quartile.
ThresholdTable calibrate_thresholds_empirical(const std::vector<double>& pool,
                                              int arl0_target, long num_sims,
                                              std::uint64_t seed, long horizon = 0,
                                              int threads = 1);

// Accumulator state of one sequential test.
struct DetectorState {
  double cusum = 0.0;
  long position = 0;       // steps since the last reset (table index base)
  long windows_seen = 0;   // absolute window count
  std::vector<long> alarms;  // absolute 1-based window indices
};

// One update with statistic s against threshold h: accumulate max(0, S+s-q),
// alarm strictly above h, then reset the accumulator and table position.
// Returns whether this step alarmed.
bool cusum_step(DetectorState& state, double s, double h, double q);

// Per-window trace of a detector run, for reports and plots.
struct DetectorTrace {
  std::vector<double> statistic;
  std::vector<double> threshold;
  std::vector<double> cusum;
  std::vector<long> alarms;
};

// Consume a stream of embeddings (one per column) in non-overlapping windows
// of model.window_size columns; a trailing partial window is ignored.
// Returns absolute 1-based indices of alarmed windows.
std::vector<long> run_detector(const Eigen::MatrixXd& stream, const BaselineModel& model,
                               const ThresholdTable& table, DetectorTrace* trace = nullptr);

}  // namespace graphdrift
