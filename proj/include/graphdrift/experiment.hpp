#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "graphdrift/detector.hpp"
#include "graphdrift/ged.hpp"
#include "graphdrift/graph.hpp"
#include "graphdrift/gxl.hpp"
#include "graphdrift/stream_sim.hpp"
#include "graphdrift/synthetic.hpp"

namespace graphdrift {

enum class DetectorKind { main, density, spectral_gap, m1 };
enum class DistanceKind { bipartite, exact };

// Where the graph collections come from: a CXL-indexed GXL dataset on disk or
// the built-in synthetic generator.
struct DatasetSpec {
  enum class Source { synthetic, gxl } source = Source::synthetic;
  std::vector<std::string> index_files;  // CXL paths, relative to the dataset root
  DatasetSchema schema;
  SyntheticLetterSpec synthetic;
  int per_class = 200;
};

// One experiment: collections, pipeline sizes, detector flavour, seeding.
// The m1 detector is an alias of the main pipeline with M = 1 and n = 25;
// everything else (seeds included) stays untouched so the two configurations
// are interchangeable.
struct ExperimentSpec {
  std::string id = "experiment";
  DatasetSpec dataset;
  std::vector<std::string> nominal_classes;
  std::vector<std::string> non_nominal_classes;
  int num_prototypes = 4;  // M
  int window = 25;         // n
  int arl0_target = 200;
  int replicates = 20;
  std::uint64_t seed = 1;
  CostModel cost;
  DetectorKind detector = DetectorKind::main;
  DistanceKind distance = DistanceKind::bipartite;
  int tc_size = 1000;
  int tp_size = 300;
  int kcentres_repeats = 20;
  long calibration_sims = 0;  // 0 selects the floor for the target rate
  long stream_length = 0;     // 0 selects 20 * n * arl0 graphs
  long stream_tau = -1;       // negative selects 12 * n * arl0

  void validate() const;
  int effective_prototypes() const;
  int effective_window() const;
  long effective_calibration_sims() const;
};

ExperimentSpec spec_from_json_text(const std::string& text);
ExperimentSpec spec_from_json_file(const std::filesystem::path& path);

// Materialize the collections the experiment's class lists refer to.
std::map<std::string, std::vector<AttributedGraph>> load_collections(
    const ExperimentSpec& spec, const std::filesystem::path& dataset_root);

// Calibrate (or reuse from the cache directory) the threshold table such a
// spec needs. The calibration seed is a fixed function of (dof, arl0), so a
// cache hit and a fresh run are indistinguishable.
ThresholdTable thresholds_for(const ExperimentSpec& spec,
                              const std::filesystem::path& cache_dir, int threads);

struct ExperimentResult {
  std::vector<ReplicateMetrics> replicates;
  RunMetrics summary;
  DetectorTrace first_trace;  // replicate 0, for the plot
  long trace_tau = 0;         // change position in the trace's step unit
};

// Full protocol: per replicate draw training sets, pick prototypes, fit the
// baseline, stream, detect, score; then aggregate. Writes metrics.csv,
// summary.json and trace_0.svg into out_dir (plus the threshold cache for
// the embedding detectors). Replicates run in parallel; results only depend
// on (spec, collections), never on the thread count.
ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::map<std::string, std::vector<AttributedGraph>>& collections,
    const std::filesystem::path& out_dir, int threads);

}  // namespace graphdrift
