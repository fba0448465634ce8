#include "graphdrift/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "graphdrift/errors.hpp"

namespace graphdrift {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Shortest representation that still round-trips; CSV cells must not depend
// on global locale or stream state.
std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

json interval_json(const Interval& interval) {
  return json{{"lo", interval.lo}, {"hi", interval.hi}};
}

}  // namespace

void save_thresholds(const std::filesystem::path& path, const ThresholdTable& table) {
  json doc{{"dof", table.dof},
           {"arl0_target", table.arl0_target},
           {"alpha", table.alpha},
           {"q", table.q},
           {"num_sims", table.num_sims},
           {"seed", table.seed},
           {"h", table.h}};
  write_text(path, doc.dump(2) + "\n");
}

ThresholdTable load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open thresholds file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("invalid thresholds file " + path.string() + ": " + e.what());
  }
  ThresholdTable table;
  try {
    table.dof = doc.at("dof").get<int>();
    table.arl0_target = doc.at("arl0_target").get<int>();
    table.alpha = doc.at("alpha").get<double>();
    table.q = doc.at("q").get<double>();
    table.num_sims = doc.at("num_sims").get<long>();
    table.seed = doc.at("seed").get<std::uint64_t>();
    table.h = doc.at("h").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError("thresholds file " + path.string() + " misses fields: " + e.what());
  }
  if (table.h.empty())
    throw ParseError("thresholds file " + path.string() + " has an empty table");
  return table;
}

std::string metrics_csv(const std::vector<ReplicateMetrics>& replicates,
                        const std::vector<long>& indices) {
  if (!indices.empty() && indices.size() != replicates.size())
    throw std::invalid_argument("metrics_csv: indices do not match replicates");
  std::ostringstream out;
  out << "replicate,detected,arl0,dod,fa1000,pre_alarms,post_alarms\n";
  for (std::size_t i = 0; i < replicates.size(); ++i) {
    const ReplicateMetrics& r = replicates[i];
    out << (indices.empty() ? static_cast<long>(i) : indices[i]) << ','
        << (r.detected ? 1 : 0) << ',';
    if (r.arl0) out << format_double(*r.arl0);
    out << ',';
    if (r.dod) out << format_double(*r.dod);
    out << ',' << format_double(r.fa1000) << ',' << r.pre_alarms << ','
        << r.post_alarms << '\n';
  }
  return out.str();
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<ReplicateMetrics>& replicates,
                       const std::vector<long>& indices) {
  write_text(path, metrics_csv(replicates, indices));
}

std::string summary_json(const RunMetrics& run) {
  json doc;
  doc["replicates"] = run.replicates;
  doc["dcr"] = {{"mean", run.dcr}, {"ci95", interval_json(run.dcr_ci)}};
  json arl0{{"count", run.arl0_count}};
  if (run.arl0_mean) {
    arl0["mean"] = *run.arl0_mean;
    arl0["ci95"] = interval_json(run.arl0_ci);
  }
  doc["arl0"] = arl0;
  json dod{{"count", run.dod_count}};
  if (run.dod_mean) {
    dod["mean"] = *run.dod_mean;
    dod["ci95"] = interval_json(run.dod_ci);
  }
  doc["dod"] = dod;
  doc["fa1000"] = {{"mean", run.fa1000_mean}, {"std", run.fa1000_std}};
  return doc.dump(2) + "\n";
}

void write_summary_json(const std::filesystem::path& path, const RunMetrics& run) {
  write_text(path, summary_json(run));
}

std::string bounds_json(const std::vector<BoundReport>& bounds,
                        const FrechetReport* frechet) {
  json doc;
  doc["bounds"] = json::array();
  for (const BoundReport& b : bounds) {
    json entry{{"name", b.bound_name},
               {"pairs_tested", b.pairs_tested},
               {"violations", b.violations},
               {"constants", b.constants}};
    doc["bounds"].push_back(std::move(entry));
  }
  if (frechet) {
    doc["frechet"] = {{"trials", frechet->trials},
                      {"minimizer_failures", frechet->minimizer_failures},
                      {"observed_mean_variation", frechet->observed_mean_variation},
                      {"expected_mean_variation", frechet->expected_mean_variation},
                      {"standard_error", frechet->standard_error},
                      {"identity_within_tolerance", frechet->identity_within_tolerance}};
  }
  return doc.dump(2) + "\n";
}

void write_bounds_json(const std::filesystem::path& path,
                       const std::vector<BoundReport>& bounds,
                       const FrechetReport* frechet) {
  write_text(path, bounds_json(bounds, frechet));
}

std::string trace_svg(const DetectorTrace& trace, long tau_window) {
  const std::size_t n = trace.cusum.size();
  if (n == 0 || trace.threshold.size() != n)
    throw std::invalid_argument("trace_svg: trace is empty or inconsistent");

  const double width = 960.0, height = 320.0;
  const double left = 50.0, right = 15.0, top = 15.0, bottom = 30.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double y_max = 1e-9;
  for (double v : trace.cusum) y_max = std::max(y_max, v);
  for (double v : trace.threshold) y_max = std::max(y_max, v);
  y_max *= 1.05;

  auto x_of = [&](double w) {
    return n > 1 ? left + plot_w * (w - 1.0) / (static_cast<double>(n) - 1.0)
                 : left + plot_w / 2.0;
  };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };
  auto coord = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return std::string(buffer);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top + plot_h)
      << "\" x2=\"" << coord(left + plot_w) << "\" y2=\"" << coord(top + plot_h)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\""
      << coord(left) << "\" y2=\"" << coord(top + plot_h) << "\" stroke=\"black\"/>\n";

  auto polyline = [&](const std::vector<double>& values, const char* colour,
                      const char* dash) {
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\"";
    if (dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) svg << ' ';
      svg << coord(x_of(static_cast<double>(i + 1))) << ','
          << coord(y_of(std::min(values[i], y_max)));
    }
    svg << "\"/>\n";
  };
  polyline(trace.threshold, "#c0392b", "6,3");
  polyline(trace.cusum, "#2c5aa0", "");

  if (tau_window >= 1 && static_cast<std::size_t>(tau_window) <= n) {
    double x = x_of(static_cast<double>(tau_window));
    svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(top) << "\" x2=\""
        << coord(x) << "\" y2=\"" << coord(top + plot_h)
        << "\" stroke=\"#7f8c8d\" stroke-dasharray=\"2,2\"/>\n";
    svg << "<text x=\"" << coord(x + 4) << "\" y=\"" << coord(top + 12)
        << "\" font-size=\"11\" fill=\"#7f8c8d\">change</text>\n";
  }
  for (long alarm : trace.alarms)
    svg << "<circle cx=\"" << coord(x_of(static_cast<double>(alarm))) << "\" cy=\""
        << coord(y_of(0.0)) << "\" r=\"3\" fill=\"#c0392b\"/>\n";

  svg << "<text x=\"" << coord(left) << "\" y=\"" << coord(height - 8)
      << "\" font-size=\"11\">window</text>\n";
  svg << "<text x=\"8\" y=\"" << coord(top + 12)
      << "\" font-size=\"11\">accumulator</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_trace_svg(const std::filesystem::path& path, const DetectorTrace& trace,
                     long tau_window) {
  write_text(path, trace_svg(trace, tau_window));
}

}  // namespace graphdrift
