#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "graphdrift/detector.hpp"
#include "graphdrift/errors.hpp"
#include "graphdrift/rng.hpp"
#include "graphdrift/stats.hpp"

using namespace graphdrift;

TEST_CASE("offset matches closed forms") {
  // Third quartile of chi-squared: dof 2 is exponential with mean 2, so the
  // quantile is 2 ln 4 exactly; dof 1 and 4 values are standard references.
  CHECK(default_offset(2) == doctest::Approx(std::sqrt(2.0 * std::log(4.0))).epsilon(1e-12));
  CHECK(default_offset(1) == doctest::Approx(1.1503).epsilon(1e-4));
  CHECK(default_offset(4) == doctest::Approx(2.3206).epsilon(1e-4));
}

TEST_CASE("cusum accumulates, alarms strictly above threshold and resets") {
  DetectorState state;
  double q = 1.0;
  CHECK_FALSE(cusum_step(state, 0.5, 1.6, q));  // max(0, -0.5) -> 0
  CHECK(state.cusum == doctest::Approx(0.0));
  CHECK(cusum_step(state, 3.0, 1.6, q));        // 2.0 > 1.6 -> alarm at window 2
  CHECK(state.cusum == doctest::Approx(0.0));
  CHECK(state.position == 0);
  CHECK_FALSE(cusum_step(state, 0.2, 1.6, q));
  CHECK(state.alarms == std::vector<long>{2});
  // Equality must not alarm.
  DetectorState edge;
  CHECK_FALSE(cusum_step(edge, 2.6, 1.6, q));
}

TEST_CASE("fit_baseline sanity on a tiny sample") {
  Eigen::MatrixXd ref(2, 4);
  ref << 0, 2, 2, 0,
         0, 2, 0, 2;
  BaselineModel model = fit_baseline(ref, 5);
  CHECK(model.mean0(0) == doctest::Approx(1.0));
  CHECK(model.mean0(1) == doctest::Approx(1.0));
  CHECK(model.scale == doctest::Approx(0.25 + 0.2));
  CHECK_FALSE(model.shrunk);
}

TEST_CASE("fit_baseline recovers an identity covariance from gaussian draws") {
  SplitMix64 rng(53);
  Eigen::MatrixXd ref(4, 10000);
  for (Eigen::Index j = 0; j < ref.cols(); ++j)
    for (Eigen::Index i = 0; i < ref.rows(); ++i) ref(i, j) = rng.next_normal();
  BaselineModel model = fit_baseline(ref, 25);
  CHECK(model.mean0.cwiseAbs().maxCoeff() < 0.05);
  CHECK((model.covariance - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
  CHECK(model.scale == doctest::Approx(1.0 / 10000.0 + 1.0 / 25.0));
}

TEST_CASE("fit_baseline rejects degenerate references") {
  Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(3, 10);
  CHECK_THROWS_AS(fit_baseline(flat, 5), DegeneratePrototypesError);
  Eigen::MatrixXd tiny(3, 4);  // below dim + 2
  tiny.setRandom();
  CHECK_THROWS_AS(fit_baseline(tiny, 5), std::invalid_argument);
}

TEST_CASE("fit_baseline shrinkage rescues a nearly singular covariance") {
  SplitMix64 rng(59);
  // Two coordinates perfectly correlated: rank-deficient covariance.
  Eigen::MatrixXd ref(2, 50);
  for (Eigen::Index j = 0; j < 50; ++j) {
    double v = rng.next_normal();
    ref(0, j) = v;
    ref(1, j) = 2.0 * v;
  }
  BaselineModel model = fit_baseline(ref, 10);
  CHECK(model.shrunk);
  // The inverse must exist and be positive definite.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.sigma_inverse);
  CHECK(solver.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("window statistic hand values") {
  // One-dimensional: s = |mean0 - window mean| / sigma.
  Eigen::MatrixXd ref(1, 8);
  ref << -2, -1, -1, 0, 0, 1, 1, 2;
  BaselineModel model = fit_baseline(ref, 4);
  double sigma2 = model.scale * model.covariance(0, 0);
  Eigen::MatrixXd window(1, 4);
  window << 3, 3, 3, 3;
  CHECK(window_statistic(model, window) ==
        doctest::Approx(std::abs(3.0 - model.mean0(0)) / std::sqrt(sigma2)).epsilon(1e-12));
  Eigen::MatrixXd centered = Eigen::MatrixXd::Constant(1, 4, model.mean0(0));
  CHECK(window_statistic(model, centered) == doctest::Approx(0.0));
  Eigen::MatrixXd wrong(1, 3);
  wrong.setZero();
  CHECK_THROWS_AS(window_statistic(model, wrong), std::invalid_argument);
}

TEST_CASE("first calibrated threshold matches the closed form") {
  // At the first step nothing has been clipped yet, so the threshold is the
  // (1-alpha) quantile of max(0, s - q) with s*s chi-squared: analytically
  // sqrt(quantile(1-alpha)) - q.
  int dof = 4, arl0 = 200;
  ThresholdTable table = calibrate_thresholds(dof, arl0, 100000, 12345, 10);
  double expected = std::sqrt(chi_squared_quantile(dof, 1.0 - 1.0 / arl0)) - default_offset(dof);
  CHECK(std::abs(table.h[0] - expected) / expected < 0.02);
  CHECK(table.h.size() == 10);
  CHECK(table.at(1) == table.h[0]);
  CHECK(table.at(99) == table.h[9]);  // clamped past the horizon
}

TEST_CASE("thresholds grow with the target arl0") {
  ThresholdTable t50 = calibrate_thresholds(4, 50, 50000, 7, 30);
  ThresholdTable t100 = calibrate_thresholds(4, 100, 50000, 7, 30);
  ThresholdTable t200 = calibrate_thresholds(4, 200, 50000, 7, 30);
  for (std::size_t w = 0; w < 30; ++w) {
    CHECK(t50.h[w] <= t100.h[w] + 1e-9);
    CHECK(t100.h[w] <= t200.h[w] + 1e-9);
  }
}

TEST_CASE("calibration is reproducible and threadcount independent") {
  ThresholdTable a = calibrate_thresholds(2, 100, 20000, 99, 40, 1);
  ThresholdTable b = calibrate_thresholds(2, 100, 20000, 99, 40, 3);
  REQUIRE(a.h.size() == b.h.size());
  for (std::size_t i = 0; i < a.h.size(); ++i) CHECK(a.h[i] == b.h[i]);
}

TEST_CASE("calibration converges in the simulation count") {
  // Same seed: trajectory streams are derived per index, so the smaller
  // population shares its draws with a prefix of the larger one.
  ThresholdTable small = calibrate_thresholds(4, 200, 100000, 21, 50);
  ThresholdTable large = calibrate_thresholds(4, 200, 1000000, 21, 50);
  for (std::size_t w = 0; w < 50; ++w)
    CHECK(std::abs(small.h[w] - large.h[w]) / large.h[w] < 0.02);
}

TEST_CASE("conditional alarm rate stays near alpha over early positions") {
  int dof = 4, arl0 = 200;
  double alpha = 1.0 / arl0;
  ThresholdTable table = calibrate_thresholds(dof, arl0, 100000, 21, 50);
  // Fresh trajectories, stopped at their first alarm: survival counts give
  // the hazard at each table position.
  const int trials = 100000;
  std::vector<long> reached(51, 0), alarmed(51, 0);
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(777, 42, static_cast<std::uint64_t>(t)));
    DetectorState state;
    for (long w = 1; w <= 50; ++w) {
      reached[static_cast<std::size_t>(w)]++;
      double s = std::sqrt(rng.next_chi_squared(dof));
      if (cusum_step(state, s, table.at(w), table.q)) {
        alarmed[static_cast<std::size_t>(w)]++;
        break;
      }
    }
  }
  for (long w = 1; w <= 50; ++w) {
    double hazard = static_cast<double>(alarmed[static_cast<std::size_t>(w)]) /
                    static_cast<double>(reached[static_cast<std::size_t>(w)]);
    CHECK(hazard > 0.7 * alpha);
    CHECK(hazard < 1.3 * alpha);
  }
}

TEST_CASE("calibration rejects undersized populations") {
  CHECK_THROWS_AS(calibrate_thresholds(4, 200, 5000, 1, 10), InsufficientSimulationsError);
  // 100/alpha dominates the 1e4 floor for large arl0 targets.
  CHECK_THROWS_AS(calibrate_thresholds(4, 500, 20000, 1, 10), InsufficientSimulationsError);
}

TEST_CASE("empirical calibration uses the pool quartile as offset") {
  std::vector<double> pool;
  for (int i = 1; i <= 1000; ++i) pool.push_back(static_cast<double>(i) / 1000.0);
  ThresholdTable table = calibrate_thresholds_empirical(pool, 100, 20000, 5, 20);
  CHECK(table.q == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(table.dof == 0);
  for (double h : table.h) CHECK(h >= 0.0);
}

TEST_CASE("run_detector on a flat stream never alarms") {
  Eigen::MatrixXd ref(2, 40);
  SplitMix64 rng(61);
  for (Eigen::Index j = 0; j < ref.cols(); ++j) {
    ref(0, j) = rng.next_normal();
    ref(1, j) = rng.next_normal();
  }
  BaselineModel model = fit_baseline(ref, 5);
  ThresholdTable table = calibrate_thresholds(2, 50, 10000, 8, 100);
  // Every window mean equals mean0, so every statistic is exactly zero.
  Eigen::MatrixXd stream = model.mean0.replicate(1, 52);  // 10 windows + remainder
  DetectorTrace trace;
  std::vector<long> alarms = run_detector(stream, model, table, &trace);
  CHECK(alarms.empty());
  CHECK(trace.statistic.size() == 10);  // trailing 2 columns dropped
  for (double s : trace.statistic) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("run_detector reacts to a strong mean shift within a few windows") {
  SplitMix64 rng(67);
  int dim = 4, n = 5;
  Eigen::MatrixXd ref(dim, 400);
  for (Eigen::Index j = 0; j < ref.cols(); ++j)
    for (Eigen::Index i = 0; i < dim; ++i) ref(i, j) = rng.next_normal();
  BaselineModel model = fit_baseline(ref, n);
  ThresholdTable table = calibrate_thresholds(dim, 100, 20000, 9, 200);

  int detected_quickly = 0;
  for (int run = 0; run < 100; ++run) {
    Eigen::MatrixXd stream(dim, 70 * n);
    for (Eigen::Index j = 0; j < stream.cols(); ++j)
      for (Eigen::Index i = 0; i < dim; ++i) {
        stream(i, j) = rng.next_normal();
        if (j >= 50 * n) stream(i, j) += 5.0;  // five pooled deviations
      }
    std::vector<long> alarms = run_detector(stream, model, table);
    for (long a : alarms)
      if (a > 50 && a <= 53) {
        detected_quickly++;
        break;
      }
  }
  CHECK(detected_quickly >= 95);
}

TEST_CASE("mean gap between alarms under the null approximates the target arl0") {
  // Small-scale version of the cross-validation between the calibrated
  // table and a fresh null detector population.
  int dof = 4, arl0 = 50;
  ThresholdTable table = calibrate_thresholds(dof, arl0, 10000, 31);
  double total_gap = 0.0;
  long gaps = 0;
  for (int t = 0; t < 200; ++t) {
    SplitMix64 rng(derive_seed(999, 77, static_cast<std::uint64_t>(t)));
    DetectorState state;
    long last = 0;
    for (long w = 1; w <= 1000; ++w) {
      double s = std::sqrt(rng.next_chi_squared(dof));
      if (cusum_step(state, s, table.at(state.position + 1), table.q)) {
        total_gap += static_cast<double>(w - last);
        last = w;
        ++gaps;
      }
    }
  }
  double mean_gap = total_gap / static_cast<double>(gaps);
  CHECK(mean_gap > 0.8 * arl0);
  CHECK(mean_gap < 1.2 * arl0);
}
