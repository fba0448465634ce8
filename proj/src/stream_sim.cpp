#include "graphdrift/stream_sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "graphdrift/rng.hpp"

namespace graphdrift {

long StreamConfig::effective_length() const {
  if (length > 0) return length;
  return 20L * static_cast<long>(window_size) * arl0_target;
}

long StreamConfig::effective_tau() const {
  long len = effective_length();
  if (tau >= 0) return std::min(tau, len);
  return std::min(12L * static_cast<long>(window_size) * arl0_target, len);
}

std::vector<const AttributedGraph*> bootstrap_stream(
    const std::vector<AttributedGraph>& nominal,
    const std::vector<AttributedGraph>& non_nominal, const StreamConfig& config) {
  const long len = config.effective_length();
  const long tau = config.effective_tau();
  if (nominal.empty())
    throw std::invalid_argument("bootstrap_stream: nominal collection is empty");
  if (tau < len && non_nominal.empty())
    throw std::invalid_argument("bootstrap_stream: post-change collection is empty");

  SplitMix64 rng(derive_seed(config.seed, seed_tag::kStream));
  std::vector<const AttributedGraph*> stream;
  stream.reserve(static_cast<std::size_t>(len));
  for (long t = 0; t < len; ++t) {
    const auto& pool = (t < tau) ? nominal : non_nominal;
    stream.push_back(&pool[rng.next_below(pool.size())]);
  }
  return stream;
}

ReplicateMetrics compute_metrics(const std::vector<long>& alarms, long tau_window,
                                 long horizon_windows, std::size_t window_size) {
  if (tau_window < 0 || tau_window > horizon_windows)
    throw std::invalid_argument("compute_metrics: tau_window outside the horizon");
  for (std::size_t i = 0; i < alarms.size(); ++i) {
    if (alarms[i] < 1 || alarms[i] > horizon_windows)
      throw std::invalid_argument("compute_metrics: alarm index outside the horizon");
    if (i > 0 && alarms[i] <= alarms[i - 1])
      throw std::invalid_argument("compute_metrics: alarms must be strictly increasing");
  }

  ReplicateMetrics out;
  long last_pre = 0;
  long last_post = 0;
  for (long a : alarms) {
    if (a <= tau_window) {
      out.pre_alarms++;
      last_pre = a;
    } else {
      out.post_alarms++;
      last_post = a;
    }
  }
  // Mean lapse between consecutive alarms; the first lapse starts at the
  // stream origin (before the change) or at the change point (after it).
  if (out.pre_alarms > 0)
    out.arl0 = static_cast<double>(last_pre) / static_cast<double>(out.pre_alarms);
  if (out.post_alarms > 0)
    out.dod = static_cast<double>(last_post - tau_window) /
              static_cast<double>(out.post_alarms);
  // A run with no false alarm still counts a quick detection as detected.
  out.detected = out.dod.has_value() && (!out.arl0.has_value() || *out.dod < *out.arl0);
  long pre_steps = tau_window * static_cast<long>(window_size);
  out.fa1000 = pre_steps > 0
                   ? static_cast<double>(out.pre_alarms) * 1000.0 /
                         static_cast<double>(pre_steps)
                   : 0.0;
  return out;
}

RunMetrics aggregate(const std::vector<ReplicateMetrics>& replicates,
                     int bootstrap_resamples, std::uint64_t seed) {
  if (replicates.empty()) throw std::invalid_argument("aggregate: no replicates");
  RunMetrics out;
  out.replicates = static_cast<int>(replicates.size());

  long detected = 0;
  std::vector<double> arl0_values, dod_values, fa_values;
  for (const ReplicateMetrics& r : replicates) {
    if (r.detected) ++detected;
    if (r.arl0) arl0_values.push_back(*r.arl0);
    if (r.dod) dod_values.push_back(*r.dod);
    fa_values.push_back(r.fa1000);
  }
  out.dcr = static_cast<double>(detected) / static_cast<double>(replicates.size());
  out.dcr_ci = clopper_pearson(detected, static_cast<long>(replicates.size()));

  auto summarise = [&](const std::vector<double>& values, std::uint64_t tag,
                       std::optional<double>* mean, Interval* ci, int* count) {
    *count = static_cast<int>(values.size());
    if (values.empty()) return;
    *mean = mean_of(values);
    if (values.size() == 1) {
      *ci = Interval{values[0], values[0]};
      return;
    }
    *ci = bootstrap_mean_ci(values, bootstrap_resamples,
                            derive_seed(seed, seed_tag::kBootstrapCi, tag));
  };
  summarise(arl0_values, 1, &out.arl0_mean, &out.arl0_ci, &out.arl0_count);
  summarise(dod_values, 2, &out.dod_mean, &out.dod_ci, &out.dod_count);

  out.fa1000_mean = mean_of(fa_values);
  out.fa1000_std = stddev_of(fa_values);
  return out;
}

}  // namespace graphdrift
