#include "graphdrift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "graphdrift/baselines.hpp"
#include "graphdrift/embedding.hpp"
#include "graphdrift/errors.hpp"
#include "graphdrift/io.hpp"
#include "graphdrift/parallel.hpp"
#include "graphdrift/rng.hpp"

namespace graphdrift {

namespace {

using nlohmann::json;

DetectorKind detector_from_string(const std::string& name) {
  if (name == "main") return DetectorKind::main;
  if (name == "density") return DetectorKind::density;
  if (name == "spectral_gap") return DetectorKind::spectral_gap;
  if (name == "m1") return DetectorKind::m1;
  throw InvalidConfigError("unknown detector '" + name + "'");
}

DistanceKind distance_from_string(const std::string& name) {
  if (name == "bipartite") return DistanceKind::bipartite;
  if (name == "exact") return DistanceKind::exact;
  throw InvalidConfigError("unknown distance '" + name + "'");
}

CostModel cost_from_json(const json& doc) {
  CostModel cost;
  cost.node_insert = doc.value("node_insert", cost.node_insert);
  cost.node_delete = doc.value("node_delete", cost.node_delete);
  cost.node_subst_scale = doc.value("node_subst_scale", cost.node_subst_scale);
  cost.edge_insert = doc.value("edge_insert", cost.edge_insert);
  cost.edge_delete = doc.value("edge_delete", cost.edge_delete);
  cost.edge_subst_scale = doc.value("edge_subst_scale", cost.edge_subst_scale);
  cost.validate();
  return cost;
}

DatasetSpec dataset_from_json(const json& doc) {
  DatasetSpec dataset;
  std::string type = doc.value("type", std::string("synthetic"));
  if (type == "synthetic") {
    dataset.source = DatasetSpec::Source::synthetic;
    dataset.synthetic.num_classes =
        doc.value("num_classes", dataset.synthetic.num_classes);
    if (doc.contains("vertices_range")) {
      auto range = doc.at("vertices_range").get<std::vector<int>>();
      if (range.size() != 2)
        throw InvalidConfigError("vertices_range must have two entries");
      dataset.synthetic.vertices_range = {range[0], range[1]};
    }
    dataset.synthetic.coordinate_noise =
        doc.value("coordinate_noise", dataset.synthetic.coordinate_noise);
    dataset.synthetic.class_separation =
        doc.value("class_separation", dataset.synthetic.class_separation);
    dataset.per_class = doc.value("per_class", dataset.per_class);
  } else if (type == "gxl") {
    dataset.source = DatasetSpec::Source::gxl;
    const json& index = doc.at("index");
    if (index.is_string())
      dataset.index_files.push_back(index.get<std::string>());
    else
      dataset.index_files = index.get<std::vector<std::string>>();
    dataset.schema = schema_from_json_text(doc.at("schema").dump());
  } else {
    throw InvalidConfigError("unknown dataset type '" + type + "'");
  }
  return dataset;
}

DistanceFn make_distance(const ExperimentSpec& spec) {
  CostModel cost = spec.cost;
  if (spec.distance == DistanceKind::exact)
    return [cost](const AttributedGraph& a, const AttributedGraph& b) {
      return exact_ged(a, b, cost);
    };
  return [cost](const AttributedGraph& a, const AttributedGraph& b) {
    return bipartite_ged(a, b, cost);
  };
}

std::vector<AttributedGraph> pool_of_classes(
    const std::map<std::string, std::vector<AttributedGraph>>& collections,
    const std::vector<std::string>& classes, const char* which) {
  std::vector<AttributedGraph> pool;
  for (const std::string& label : classes) {
    auto it = collections.find(label);
    if (it == collections.end())
      throw InvalidConfigError(std::string(which) + " class '" + label +
                               "' is not in the dataset");
    pool.insert(pool.end(), it->second.begin(), it->second.end());
  }
  if (pool.empty())
    throw InvalidConfigError(std::string(which) + " collection is empty");
  return pool;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (nominal_classes.empty() || non_nominal_classes.empty())
    throw InvalidConfigError("experiment: class lists must be nonempty");
  if (replicates < 1) throw InvalidConfigError("experiment: replicates must be >= 1");
  if (num_prototypes < 1 || window < 1)
    throw InvalidConfigError("experiment: M and n must be positive");
  if (arl0_target < 2) throw InvalidConfigError("experiment: arl0 must be >= 2");
  if (tc_size < effective_prototypes())
    throw InvalidConfigError("experiment: tc_size smaller than the prototype count");
  if (tp_size < effective_prototypes() + 2)
    throw InvalidConfigError("experiment: tp_size too small to fit a covariance");
  if (kcentres_repeats < 1)
    throw InvalidConfigError("experiment: kcentres_repeats must be >= 1");
  cost.validate();
  if (dataset.source == DatasetSpec::Source::synthetic) dataset.synthetic.validate();
  if (dataset.source == DatasetSpec::Source::gxl && dataset.index_files.empty())
    throw InvalidConfigError("experiment: gxl dataset needs at least one index file");
}

int ExperimentSpec::effective_prototypes() const {
  return detector == DetectorKind::m1 ? 1 : num_prototypes;
}

int ExperimentSpec::effective_window() const {
  return detector == DetectorKind::m1 ? 25 : window;
}

long ExperimentSpec::effective_calibration_sims() const {
  if (calibration_sims > 0) return calibration_sims;
  return std::max<long>(10000, 100L * arl0_target);
}

ExperimentSpec spec_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid experiment JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.id = doc.value("id", spec.id);
    if (doc.contains("dataset")) spec.dataset = dataset_from_json(doc.at("dataset"));
    spec.nominal_classes =
        doc.value("nominal_classes", std::vector<std::string>{});
    spec.non_nominal_classes =
        doc.value("non_nominal_classes", std::vector<std::string>{});
    spec.num_prototypes = doc.value("M", spec.num_prototypes);
    spec.window = doc.value("n", spec.window);
    spec.arl0_target = doc.value("arl0", spec.arl0_target);
    spec.replicates = doc.value("replicates", spec.replicates);
    spec.seed = doc.value("seed", spec.seed);
    if (doc.contains("cost_model")) spec.cost = cost_from_json(doc.at("cost_model"));
    spec.detector = detector_from_string(doc.value("detector", std::string("main")));
    spec.distance =
        distance_from_string(doc.value("distance", std::string("bipartite")));
    spec.tc_size = doc.value("tc_size", spec.tc_size);
    spec.tp_size = doc.value("tp_size", spec.tp_size);
    spec.kcentres_repeats = doc.value("kcentres_repeats", spec.kcentres_repeats);
    spec.calibration_sims = doc.value("calibration_sims", spec.calibration_sims);
    spec.stream_length = doc.value("stream_length", spec.stream_length);
    spec.stream_tau = doc.value("stream_tau", spec.stream_tau);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid experiment JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec spec_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return spec_from_json_text(text.str());
}

std::map<std::string, std::vector<AttributedGraph>> load_collections(
    const ExperimentSpec& spec, const std::filesystem::path& dataset_root) {
  if (spec.dataset.source == DatasetSpec::Source::synthetic)
    return generate_synthetic(spec.dataset.synthetic, spec.dataset.per_class,
                              spec.seed);
  std::map<std::string, std::vector<AttributedGraph>> merged;
  for (const std::string& index : spec.dataset.index_files) {
    auto part = load_gxl_collection(dataset_root / index, spec.dataset.schema);
    for (auto& [label, graphs] : part) {
      auto& bucket = merged[label];
      bucket.insert(bucket.end(), std::make_move_iterator(graphs.begin()),
                    std::make_move_iterator(graphs.end()));
    }
  }
  return merged;
}

ThresholdTable thresholds_for(const ExperimentSpec& spec,
                              const std::filesystem::path& cache_dir, int threads) {
  const int dof = spec.effective_prototypes();
  const long sims = spec.effective_calibration_sims();
  // The calibration seed is a function of the table identity alone so a
  // cached table equals a recomputed one and runs stay reproducible whether
  // or not the cache was warm.
  const std::uint64_t cal_seed = derive_seed(
      0, seed_tag::kCalibration,
      static_cast<std::uint64_t>(dof) * 1000003ULL +
          static_cast<std::uint64_t>(spec.arl0_target));

  std::filesystem::path file =
      cache_dir / ("thresholds_" + std::to_string(dof) + "_" +
                   std::to_string(spec.arl0_target) + ".json");
  if (std::filesystem::exists(file)) {
    ThresholdTable cached = load_thresholds(file);
    if (cached.dof == dof && cached.arl0_target == spec.arl0_target &&
        cached.num_sims == sims && cached.seed == cal_seed)
      return cached;
  }
  ThresholdTable table =
      calibrate_thresholds(dof, spec.arl0_target, sims, cal_seed, 0, threads);
  std::filesystem::create_directories(cache_dir);
  save_thresholds(file, table);
  return table;
}

ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::map<std::string, std::vector<AttributedGraph>>& collections,
    const std::filesystem::path& out_dir, int threads) {
  spec.validate();
  std::filesystem::create_directories(out_dir);

  const int m = spec.effective_prototypes();
  const int window = spec.effective_window();
  const DistanceFn dist = make_distance(spec);
  const bool embedding_detector =
      spec.detector == DetectorKind::main || spec.detector == DetectorKind::m1;

  std::vector<AttributedGraph> nominal =
      pool_of_classes(collections, spec.nominal_classes, "nominal");
  std::vector<AttributedGraph> non_nominal =
      pool_of_classes(collections, spec.non_nominal_classes, "non-nominal");

  StreamConfig stream_config;
  stream_config.window_size = static_cast<std::size_t>(window);
  stream_config.arl0_target = spec.arl0_target;
  stream_config.length = spec.stream_length;
  stream_config.tau = spec.stream_tau;
  const long length = stream_config.effective_length();
  const long tau = stream_config.effective_tau();
  const bool change_occurs = tau < length;

  // Stream draws and the training sets are pool members, so every distance
  // the pipeline needs reduces to a lookup in the nominal pairwise matrix
  // plus, per replicate, the prototype rows against the other pool.
  Eigen::MatrixXd nominal_pairwise;
  if (embedding_detector) nominal_pairwise = pairwise_distances(nominal, dist, threads);

  std::unordered_map<const AttributedGraph*, std::pair<bool, std::size_t>> locate;
  locate.reserve(nominal.size() + non_nominal.size());
  for (std::size_t i = 0; i < nominal.size(); ++i) locate[&nominal[i]] = {true, i};
  for (std::size_t i = 0; i < non_nominal.size(); ++i)
    locate[&non_nominal[i]] = {false, i};

  ThresholdTable table;
  if (embedding_detector) table = thresholds_for(spec, out_dir, threads);

  ExperimentResult result;
  result.replicates.resize(static_cast<std::size_t>(spec.replicates));
  std::vector<char> done(static_cast<std::size_t>(spec.replicates), 0);
  DetectorTrace first_trace;
  long trace_tau = 0;

  auto run_replicate = [&](std::size_t r) {
    const std::uint64_t root = derive_seed(spec.seed, seed_tag::kReplicate, r);

    SplitMix64 training_rng(derive_seed(root, seed_tag::kTraining));
    std::vector<std::size_t> tc_idx(static_cast<std::size_t>(spec.tc_size));
    for (std::size_t& idx : tc_idx) idx = training_rng.next_below(nominal.size());
    std::vector<std::size_t> tp_idx(static_cast<std::size_t>(spec.tp_size));
    for (std::size_t& idx : tp_idx) idx = training_rng.next_below(nominal.size());

    StreamConfig config = stream_config;
    config.seed = root;
    std::vector<const AttributedGraph*> stream =
        bootstrap_stream(nominal, non_nominal, config);

    DetectorTrace* trace = (r == 0) ? &first_trace : nullptr;
    if (embedding_detector) {
      Eigen::MatrixXd tc_pairwise(spec.tc_size, spec.tc_size);
      for (int i = 0; i < spec.tc_size; ++i)
        for (int j = 0; j < spec.tc_size; ++j)
          tc_pairwise(i, j) =
              nominal_pairwise(static_cast<Eigen::Index>(tc_idx[static_cast<std::size_t>(i)]),
                               static_cast<Eigen::Index>(tc_idx[static_cast<std::size_t>(j)]));
      KCentresResult centres =
          k_centres_on_matrix(tc_pairwise, static_cast<std::size_t>(m),
                              spec.kcentres_repeats, derive_seed(root, seed_tag::kKCentres));

      std::vector<std::size_t> proto_pool_idx(centres.centres.size());
      for (std::size_t i = 0; i < centres.centres.size(); ++i)
        proto_pool_idx[i] = tc_idx[centres.centres[i]];

      // Distances from each prototype to the post-change pool; the nominal
      // side is already covered by the big matrix.
      std::vector<Eigen::VectorXd> proto_to_non(proto_pool_idx.size());
      if (change_occurs)
        for (std::size_t p = 0; p < proto_pool_idx.size(); ++p) {
          Eigen::VectorXd row(static_cast<Eigen::Index>(non_nominal.size()));
          for (std::size_t j = 0; j < non_nominal.size(); ++j)
            row(static_cast<Eigen::Index>(j)) =
                dist(nominal[proto_pool_idx[p]], non_nominal[j]);
          proto_to_non[p] = std::move(row);
        }

      auto embed_pool_member = [&](bool from_nominal, std::size_t idx,
                                   Eigen::Ref<Eigen::VectorXd> out) {
        for (std::size_t p = 0; p < proto_pool_idx.size(); ++p)
          out(static_cast<Eigen::Index>(p)) =
              from_nominal
                  ? nominal_pairwise(static_cast<Eigen::Index>(proto_pool_idx[p]),
                                     static_cast<Eigen::Index>(idx))
                  : proto_to_non[p](static_cast<Eigen::Index>(idx));
      };

      Eigen::MatrixXd tp_embedded(m, spec.tp_size);
      for (int j = 0; j < spec.tp_size; ++j)
        embed_pool_member(true, tp_idx[static_cast<std::size_t>(j)],
                          tp_embedded.col(j));
      BaselineModel model = fit_baseline(tp_embedded, window);

      Eigen::MatrixXd stream_embedded(m, static_cast<Eigen::Index>(stream.size()));
      for (std::size_t t = 0; t < stream.size(); ++t) {
        const auto& where = locate.at(stream[t]);
        embed_pool_member(where.first, where.second,
                          stream_embedded.col(static_cast<Eigen::Index>(t)));
      }

      std::vector<long> alarms = run_detector(stream_embedded, model, table, trace);
      long horizon_w = length / window;
      long tau_w = tau / window;
      result.replicates[r] = compute_metrics(alarms, tau_w, horizon_w,
                                             static_cast<std::size_t>(window));
      if (trace) trace_tau = tau_w;
    } else {
      ScalarFeature feature = spec.detector == DetectorKind::density
                                  ? ScalarFeature::edge_density
                                  : ScalarFeature::spectral_gap;
      std::vector<AttributedGraph> tc;
      tc.reserve(tc_idx.size());
      for (std::size_t idx : tc_idx) tc.push_back(nominal[idx]);
      ScalarBaselineModel model = fit_scalar_baseline(
          feature, tc, spec.arl0_target, spec.effective_calibration_sims(),
          derive_seed(root, seed_tag::kScalarBaseline));
      std::vector<long> alarms = run_scalar_baseline(stream, model, trace);
      result.replicates[r] = compute_metrics(alarms, tau, length, 1);
      if (trace) trace_tau = tau;
    }
    done[r] = 1;
  };

  try {
    parallel_for(static_cast<std::size_t>(spec.replicates), threads, run_replicate);
  } catch (...) {
    // Flush whatever completed so a long run is not lost to one bad replicate.
    std::vector<ReplicateMetrics> partial;
    std::vector<long> indices;
    for (std::size_t r = 0; r < done.size(); ++r)
      if (done[r]) {
        partial.push_back(result.replicates[r]);
        indices.push_back(static_cast<long>(r));
      }
    if (!partial.empty())
      write_metrics_csv(out_dir / "metrics_partial.csv", partial, indices);
    throw;
  }

  result.summary = aggregate(result.replicates, 10000, spec.seed);
  result.first_trace = std::move(first_trace);
  result.trace_tau = trace_tau;

  write_metrics_csv(out_dir / "metrics.csv", result.replicates);
  write_summary_json(out_dir / "summary.json", result.summary);
  if (!result.first_trace.cusum.empty())
    write_trace_svg(out_dir / "trace_0.svg", result.first_trace, result.trace_tau);
  return result;
}

}  // namespace graphdrift
