#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphdrift/graph.hpp"
#include "graphdrift/stats.hpp"

namespace graphdrift {

// Bootstrap stream layout. Lengths are in graph-level steps; tau marks the
// first step drawn from the post-change collection. Non-positive length and
// negative tau select the standard sizes 20 * n * arl0 and 12 * n * arl0.
struct StreamConfig {
  std::size_t window_size = 25;
  int arl0_target = 200;
  long length = 0;
  long tau = -1;
  std::uint64_t seed = 0;

  long effective_length() const;
  long effective_tau() const;
};

// Uniform draws with replacement: nominal before tau, non_nominal from tau
// on. tau == length yields a stream with no change at all.
std::vector<const AttributedGraph*> bootstrap_stream(
    const std::vector<AttributedGraph>& nominal,
    const std::vector<AttributedGraph>& non_nominal, const StreamConfig& config);

// Outcome of one replicate, computed from alarm positions in window units.
// Fields are missing when the corresponding alarm set is empty.
struct ReplicateMetrics {
  std::optional<double> arl0;  // mean gap between pre-change alarms, start at 0
  std::optional<double> dod;   // mean gap between post-change alarms, start at tau
  bool detected = false;       // dod strictly below the observed arl0
  double fa1000 = 0.0;         // pre-change alarms per 1000 graph-level steps
  long pre_alarms = 0;
  long post_alarms = 0;
};

// alarms: strictly increasing 1-based window indices. tau_window: number of
// windows fully before the change. window_size converts windows to
// graph-level steps for the false-alarm rate.
ReplicateMetrics compute_metrics(const std::vector<long>& alarms, long tau_window,
                                 long horizon_windows, std::size_t window_size);

// Experiment-level summary across replicates.
struct RunMetrics {
  int replicates = 0;
  double dcr = 0.0;
  Interval dcr_ci;
  std::optional<double> arl0_mean;
  Interval arl0_ci;
  int arl0_count = 0;
  std::optional<double> dod_mean;
  Interval dod_ci;
  int dod_count = 0;
  double fa1000_mean = 0.0;
  double fa1000_std = 0.0;
};

// Percentile bootstrap for the mean intervals, exact binomial for the rate.
RunMetrics aggregate(const std::vector<ReplicateMetrics>& replicates,
                     int bootstrap_resamples = 10000, std::uint64_t seed = 0);

}  // namespace graphdrift
