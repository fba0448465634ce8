// Command line front end: calibrate threshold tables, run configured
// experiments, audit the distance/embedding bounds, and report results.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphdrift/detector.hpp"
#include "graphdrift/embedding.hpp"
#include "graphdrift/errors.hpp"
#include "graphdrift/experiment.hpp"
#include "graphdrift/ged.hpp"
#include "graphdrift/io.hpp"
#include "graphdrift/rng.hpp"
#include "graphdrift/synthetic.hpp"
#include "graphdrift/theory.hpp"

namespace fs = std::filesystem;
using namespace graphdrift;

namespace {

std::string fmt(double v, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

std::string fmt_interval(const Interval& i, int digits = 3) {
  return "[" + fmt(i.lo, digits) + ", " + fmt(i.hi, digits) + "]";
}

void print_summary(const RunMetrics& run) {
  std::cout << "replicates : " << run.replicates << "\n";
  std::cout << "dcr        : " << fmt(run.dcr) << " " << fmt_interval(run.dcr_ci)
            << "\n";
  if (run.arl0_mean)
    std::cout << "arl0       : " << fmt(*run.arl0_mean) << " "
              << fmt_interval(run.arl0_ci) << " (n=" << run.arl0_count << ")\n";
  else
    std::cout << "arl0       : no pre-change alarms (n=0)\n";
  if (run.dod_mean)
    std::cout << "dod        : " << fmt(*run.dod_mean) << " "
              << fmt_interval(run.dod_ci) << " (n=" << run.dod_count << ")\n";
  else
    std::cout << "dod        : never detected (n=0)\n";
  std::cout << "fa1000     : " << fmt(run.fa1000_mean) << " +- "
            << fmt(run.fa1000_std) << "\n";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

Eigen::MatrixXd covariance_with_ridge(const Eigen::MatrixXd& columns) {
  Eigen::VectorXd mean = columns.rowwise().mean();
  Eigen::MatrixXd centred = columns.colwise() - mean;
  Eigen::MatrixXd sigma =
      centred * centred.transpose() / static_cast<double>(columns.cols() - 1);
  // Tiny ridge keeps the matrix positive definite; the bounds hold for any
  // positive definite weighting.
  double scale = sigma.diagonal().mean();
  sigma.diagonal().array() += 1e-9 * (scale > 0 ? scale : 1.0);
  return sigma;
}

IdentifiedGraph random_identified(SplitMix64& rng, int n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = rng.next_unit_co();
      w(i, j) = v;
      w(j, i) = v;
    }
  return IdentifiedGraph(std::move(w));
}

// Flatten a labelled collection into one vector (label order, then index).
std::vector<AttributedGraph> flatten(
    const std::map<std::string, std::vector<AttributedGraph>>& collections) {
  std::vector<AttributedGraph> all;
  for (const auto& [label, graphs] : collections)
    all.insert(all.end(), graphs.begin(), graphs.end());
  return all;
}

int run_verb(const std::string& config, const std::string& out_dir,
             const std::string& dataset_root, bool seed_set, std::uint64_t seed,
             bool reps_set, int replicates, int threads) {
  ExperimentSpec spec = spec_from_json_file(config);
  if (seed_set) spec.seed = seed;
  if (reps_set) spec.replicates = replicates;
  spec.validate();

  if (spec.dataset.source == DatasetSpec::Source::gxl && dataset_root.empty())
    throw InvalidConfigError(
        "gxl datasets need --dataset-root or GRAPHDRIFT_DATA to be set");

  std::cout << "loading dataset for '" << spec.id << "'...\n";
  auto collections = load_collections(spec, dataset_root);
  std::size_t total = 0;
  for (const auto& [label, graphs] : collections) total += graphs.size();
  std::cout << "  " << collections.size() << " classes, " << total << " graphs\n";

  fs::path out = out_dir.empty() ? fs::path("results") / spec.id : fs::path(out_dir);
  auto start = std::chrono::steady_clock::now();
  ExperimentResult result = run_experiment(spec, collections, out, threads);
  std::cout << "finished " << spec.replicates << " replicates in "
            << fmt(elapsed_ms(start) / 1000.0, 1) << " s\n\n";
  print_summary(result.summary);
  std::cout << "\noutputs in " << out.string() << "\n";
  return 0;
}

int calibrate_verb(int dof, int arl0, long sims, const std::string& out,
                   int threads) {
  ExperimentSpec probe;
  probe.num_prototypes = dof;
  probe.arl0_target = arl0;
  probe.calibration_sims = sims;
  long effective = probe.effective_calibration_sims();

  std::cout << "calibrating dof=" << dof << " arl0=" << arl0 << " with " << effective
            << " trajectories...\n";
  auto start = std::chrono::steady_clock::now();
  std::uint64_t seed =
      derive_seed(0, seed_tag::kCalibration,
                  static_cast<std::uint64_t>(dof) * 1000003ULL +
                      static_cast<std::uint64_t>(arl0));
  ThresholdTable table = calibrate_thresholds(dof, arl0, effective, seed, 0, threads);
  std::cout << "done in " << fmt(elapsed_ms(start) / 1000.0, 1) << " s\n";
  std::cout << "q  = " << fmt(table.q, 6) << "\n";
  std::cout << "h1 = " << fmt(table.h.front(), 6) << " (of " << table.h.size()
            << " positions)\n";
  save_thresholds(out, table);
  std::cout << "table written to " << out << "\n";
  return 0;
}

int report_verb(const std::string& dir) {
  fs::path base(dir);
  fs::path summary_file = base / "summary.json";
  std::ifstream in(summary_file, std::ios::binary);
  if (!in) throw ParseError("no summary.json under " + dir);
  nlohmann::json doc;
  in >> doc;

  RunMetrics run;
  run.replicates = doc.at("replicates").get<int>();
  run.dcr = doc.at("dcr").at("mean").get<double>();
  run.dcr_ci = {doc.at("dcr").at("ci95").at("lo").get<double>(),
                doc.at("dcr").at("ci95").at("hi").get<double>()};
  run.arl0_count = doc.at("arl0").at("count").get<int>();
  if (doc.at("arl0").contains("mean")) {
    run.arl0_mean = doc.at("arl0").at("mean").get<double>();
    run.arl0_ci = {doc.at("arl0").at("ci95").at("lo").get<double>(),
                   doc.at("arl0").at("ci95").at("hi").get<double>()};
  }
  run.dod_count = doc.at("dod").at("count").get<int>();
  if (doc.at("dod").contains("mean")) {
    run.dod_mean = doc.at("dod").at("mean").get<double>();
    run.dod_ci = {doc.at("dod").at("ci95").at("lo").get<double>(),
                  doc.at("dod").at("ci95").at("hi").get<double>()};
  }
  run.fa1000_mean = doc.at("fa1000").at("mean").get<double>();
  run.fa1000_std = doc.at("fa1000").at("std").get<double>();
  print_summary(run);

  fs::path metrics_file = base / "metrics.csv";
  std::ifstream csv(metrics_file, std::ios::binary);
  if (csv) {
    std::cout << "\nper-replicate metrics (" << metrics_file.string() << "):\n";
    std::string line;
    while (std::getline(csv, line)) std::cout << "  " << line << "\n";
  }
  return 0;
}

int validate_theory_verb(const std::string& out, int pairs, int trials,
                         std::uint64_t seed) {
  CostModel cost;
  DistanceFn dist = [cost](const AttributedGraph& a, const AttributedGraph& b) {
    return exact_ged(a, b, cost);
  };

  SyntheticLetterSpec sspec;
  sspec.num_classes = 6;
  sspec.vertices_range = {3, 5};
  sspec.coordinate_noise = 0.1;
  auto all = flatten(generate_synthetic(sspec, 40, seed));

  SplitMix64 rng(derive_seed(seed, seed_tag::kTheory, 1000));
  std::vector<AttributedGraph> training;
  for (int i = 0; i < 30; ++i) training.push_back(all[rng.next_below(all.size())]);
  PrototypeSet protos =
      k_centres(training, 4, dist, 3, derive_seed(seed, seed_tag::kTheory, 1001));
  Eigen::MatrixXd sigma = covariance_with_ridge(embed_all(training, protos, dist));

  std::vector<GraphPair> graph_pairs;
  graph_pairs.reserve(static_cast<std::size_t>(pairs));
  for (int i = 0; i < pairs; ++i)
    graph_pairs.emplace_back(all[rng.next_below(all.size())],
                             all[rng.next_below(all.size())]);

  std::vector<BoundReport> reports;
  reports.push_back(check_embedding_lower_bound(graph_pairs, protos, sigma, dist));
  reports.push_back(check_embedding_norm_chain(graph_pairs, protos, dist));

  // Identified graphs on a fixed six-vertex universe; twenty prototypes span
  // the fifteen-dimensional weight space.
  const int universe = 6;
  std::vector<IdentifiedGraph> id_protos;
  for (int i = 0; i < 20; ++i) id_protos.push_back(random_identified(rng, universe));
  Eigen::MatrixXd proto_pairwise(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      proto_pairwise(i, j) = frobenius_distance(id_protos[static_cast<std::size_t>(i)],
                                                id_protos[static_cast<std::size_t>(j)]);
  const int weight_dim = universe * (universe - 1) / 2;
  if (static_cast<int>(id_protos.size()) < weight_dim + 1) {
    std::cerr << "warning: " << id_protos.size() << " prototypes cannot affinely "
              << "span the " << weight_dim << "-dimensional weight space "
              << "(need dimension+1); out-of-sample coordinates may be "
              << "non-unique\n";
  }
  ScalingModel scaling = classical_scaling(proto_pairwise);

  Eigen::MatrixXd u_samples(scaling.x.rows(), 200);
  for (int s = 0; s < 200; ++s) {
    IdentifiedGraph g = random_identified(rng, universe);
    Eigen::VectorXd y(20);
    for (int j = 0; j < 20; ++j)
      y(j) = frobenius_distance(g, id_protos[static_cast<std::size_t>(j)]);
    u_samples.col(s) = u_transform(y, scaling);
  }
  Eigen::MatrixXd u_sigma = covariance_with_ridge(u_samples);

  std::vector<IdentifiedPair> id_pairs;
  for (int i = 0; i < pairs; ++i)
    id_pairs.emplace_back(random_identified(rng, universe),
                          random_identified(rng, universe));
  reports.push_back(
      check_identified_bilipschitz(id_pairs, id_protos, scaling, u_sigma));

  std::vector<AttributedGraph> v2_sample;
  for (int i = 0; i < 25; ++i) v2_sample.push_back(all[rng.next_below(all.size())]);
  PrototypeSet v2_protos =
      k_centres(v2_sample, 3, dist, 3, derive_seed(seed, seed_tag::kTheory, 1002));
  reports.push_back(check_v2_markov(v2_sample, v2_protos, dist, 1000,
                                    derive_seed(seed, seed_tag::kTheory, 1003)));

  FrechetReport frechet = check_frechet_euclidean(5, 3, trials, seed);

  bool all_good = true;
  for (const BoundReport& r : reports) {
    bool ok = r.violations == 0;
    all_good = all_good && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << r.bound_name << "  ("
              << r.pairs_tested << " pairs, " << r.violations << " violations)\n";
  }
  std::cout << (frechet.identity_within_tolerance && frechet.minimizer_failures == 0
                    ? "PASS"
                    : "FAIL")
            << "  euclidean_mean_variation  (observed "
            << fmt(frechet.observed_mean_variation) << ", expected "
            << fmt(frechet.expected_mean_variation) << ", se "
            << fmt(frechet.standard_error) << ")\n";
  all_good =
      all_good && frechet.identity_within_tolerance && frechet.minimizer_failures == 0;

  write_bounds_json(out, reports, &frechet);
  std::cout << "report written to " << out << "\n";
  return all_good ? 0 : 1;
}

int bench_verb(std::uint64_t seed, int threads) {
  SyntheticLetterSpec sspec;
  sspec.num_classes = 4;
  sspec.vertices_range = {4, 6};
  auto all = flatten(generate_synthetic(sspec, 50, seed));
  SplitMix64 rng(derive_seed(seed, seed_tag::kTheory, 2000));
  CostModel cost;

  {
    auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i)
      sink += bipartite_ged(all[rng.next_below(all.size())],
                            all[rng.next_below(all.size())], cost);
    double ms = elapsed_ms(start);
    std::cout << "bipartite ged   : " << fmt(ms * 1000.0 / n, 1) << " us/pair  (sum "
              << fmt(sink, 1) << ")\n";
  }
  {
    auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i)
      sink += exact_ged(all[rng.next_below(all.size())],
                        all[rng.next_below(all.size())], cost);
    double ms = elapsed_ms(start);
    std::cout << "exact ged       : " << fmt(ms * 1000.0 / n, 1) << " us/pair  (sum "
              << fmt(sink, 1) << ")\n";
  }
  {
    std::vector<AttributedGraph> subset(all.begin(), all.begin() + 150);
    DistanceFn dist = [cost](const AttributedGraph& a, const AttributedGraph& b) {
      return bipartite_ged(a, b, cost);
    };
    auto start = std::chrono::steady_clock::now();
    Eigen::MatrixXd m = pairwise_distances(subset, dist, threads);
    double ms = elapsed_ms(start);
    std::cout << "pairwise 150x150: " << fmt(ms, 1) << " ms  (mean "
              << fmt(m.mean(), 3) << ")\n";
  }
  {
    auto start = std::chrono::steady_clock::now();
    ThresholdTable table = calibrate_thresholds(4, 50, 10000, seed, 0, threads);
    double ms = elapsed_ms(start);
    std::cout << "calibrate 1e4   : " << fmt(ms, 1) << " ms  (h1 "
              << fmt(table.h.front(), 3) << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissimilarity-embedding drift detection for graph streams"};
  app.require_subcommand(1);

  // run
  std::string config, out_dir, dataset_root;
  std::uint64_t seed = 0;
  int replicates = 0, threads = 1;
  CLI::App* run_cmd = app.add_subcommand("run", "run a configured experiment");
  run_cmd->add_option("--config", config, "experiment config (json)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out-dir", out_dir, "output directory (default results/<id>)");
  run_cmd->add_option("--dataset-root", dataset_root, "root of gxl datasets")
      ->envname("GRAPHDRIFT_DATA");
  CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "override config seed");
  CLI::Option* reps_opt =
      run_cmd->add_option("--replicates", replicates, "override replicate count");
  run_cmd->add_option("--threads", threads, "worker threads");

  // calibrate
  int dof = 4, arl0 = 200;
  long sims = 0;
  std::string table_out = "thresholds.json";
  int cal_threads = 1;
  CLI::App* cal_cmd =
      app.add_subcommand("calibrate", "build an alarm threshold table");
  cal_cmd->add_option("--dof", dof, "embedding dimension (chi-squared dof)");
  cal_cmd->add_option("--arl0", arl0, "target mean windows between false alarms");
  cal_cmd->add_option("--sims", sims, "monte carlo trajectories (0 = floor)");
  cal_cmd->add_option("--out", table_out, "output json file");
  cal_cmd->add_option("--threads", cal_threads, "worker threads");

  // report
  std::string report_dir;
  CLI::App* report_cmd =
      app.add_subcommand("report", "print the results of a finished run");
  report_cmd->add_option("--dir", report_dir, "experiment output directory")
      ->required();

  // validate-theory
  std::string bounds_out = "bounds.json";
  int pairs = 200, trials = 2000;
  std::uint64_t theory_seed = 1;
  CLI::App* theory_cmd = app.add_subcommand(
      "validate-theory", "audit the distance and embedding bounds empirically");
  theory_cmd->add_option("--out", bounds_out, "output json file");
  theory_cmd->add_option("--pairs", pairs, "graph pairs per bound");
  theory_cmd->add_option("--trials", trials, "mean-variation trials");
  theory_cmd->add_option("--seed", theory_seed, "rng seed");

  // bench
  std::uint64_t bench_seed = 1;
  int bench_threads = 1;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time the heavy kernels");
  bench_cmd->add_option("--seed", bench_seed, "rng seed");
  bench_cmd->add_option("--threads", bench_threads, "worker threads");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed())
      return run_verb(config, out_dir, dataset_root, seed_opt->count() > 0, seed,
                      reps_opt->count() > 0, replicates, threads);
    if (cal_cmd->parsed()) return calibrate_verb(dof, arl0, sims, table_out, cal_threads);
    if (report_cmd->parsed()) return report_verb(report_dir);
    if (theory_cmd->parsed())
      return validate_theory_verb(bounds_out, pairs, trials, theory_seed);
    if (bench_cmd->parsed()) return bench_verb(bench_seed, bench_threads);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
