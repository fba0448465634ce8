#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphdrift/detector.hpp"
#include "graphdrift/stream_sim.hpp"
#include "graphdrift/theory.hpp"

namespace graphdrift {

// Threshold tables round-trip through JSON so calibrations can be cached on
// disk and shared across runs.
void save_thresholds(const std::filesystem::path& path, const ThresholdTable& table);
ThresholdTable load_thresholds(const std::filesystem::path& path);

// One row per replicate. Missing values serialize as empty cells; doubles use
// a fixed shortest-round-trip format so reruns are byte-identical. A nonempty
// `indices` list relabels the replicate column (used for partial flushes).
std::string metrics_csv(const std::vector<ReplicateMetrics>& replicates,
                        const std::vector<long>& indices = {});
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<ReplicateMetrics>& replicates,
                       const std::vector<long>& indices = {});

// Aggregates and confidence intervals of one experiment run.
std::string summary_json(const RunMetrics& run);
void write_summary_json(const std::filesystem::path& path, const RunMetrics& run);

// Bound-check reports, optionally with the Euclidean mean/variation report.
std::string bounds_json(const std::vector<BoundReport>& bounds,
                        const FrechetReport* frechet = nullptr);
void write_bounds_json(const std::filesystem::path& path,
                       const std::vector<BoundReport>& bounds,
                       const FrechetReport* frechet = nullptr);

// Static line chart of one detector run: accumulator and per-window threshold,
// alarms as markers, the change point as a vertical rule.
std::string trace_svg(const DetectorTrace& trace, long tau_window);
void write_trace_svg(const std::filesystem::path& path, const DetectorTrace& trace,
                     long tau_window);

}  // namespace graphdrift
