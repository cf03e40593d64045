#include "steady/metrics.hpp"

#include <cmath>

namespace steady::metrics {

double mean(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double lsd(std::span<const double> lengths) {
  if (lengths.empty()) throw ArgumentError("lsd: empty sample");
  const double mu = mean(lengths);
  double ss = 0.0;
  for (double v : lengths) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(lengths.size()));
}

double fsd(std::span<const double> section_counts) {
  if (section_counts.empty()) throw ArgumentError("fsd: empty sample");
  return lsd(section_counts);
}

double lvc(double lsd, double mean) {
  if (mean == 0.0) throw UndefinedMetric("lvc: mean length is zero");
  return lsd / mean * 100.0;
}

double mla(double mean, double target) {
  if (!(target > 0.0)) throw ArgumentError("mla: target must be > 0");
  return std::max(0.0, 1.0 - std::abs(mean - target) / target) * 100.0;
}

double sca(std::int64_t correct, std::int64_t required) {
  if (required <= 0) throw ArgumentError("sca: required must be > 0");
  if (correct < 0) throw ArgumentError("sca: correct must be >= 0");
  return static_cast<double>(correct) / static_cast<double>(required) * 100.0;
}

LengthSummary summarize_lengths(std::span<const double> lengths, double target) {
  LengthSummary s;
  s.mean = mean(lengths);
  s.lsd = lsd(lengths);
  s.lvc = lvc(s.lsd, s.mean);
  s.mla = mla(s.mean, target);
  return s;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw UndefinedMetric("cosine_similarity: zero-norm vector");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<double> window_mean(const HiddenStates& hidden, std::int64_t step, int window) {
  if (window < 1) throw ArgumentError("window_mean: window must be >= 1");
  if (step < 1 || step > static_cast<std::int64_t>(hidden.size()))
    throw ArgumentError("window_mean: step " + std::to_string(step) + " not in trace");
  const std::int64_t first = std::max<std::int64_t>(1, step - window + 1);
  std::vector<double> acc;
  std::size_t count = 0;
  for (std::int64_t t = first; t <= step; ++t) {
    for (const auto& layer : hidden[static_cast<std::size_t>(t - 1)]) {
      if (acc.empty()) acc.assign(layer.size(), 0.0);
      if (layer.size() != acc.size()) throw ArgumentError("window_mean: ragged hidden states");
      for (std::size_t i = 0; i < layer.size(); ++i) acc[i] += layer[i];
      ++count;
    }
  }
  if (count == 0) throw ArgumentError("window_mean: no layers at step " + std::to_string(step));
  for (double& v : acc) v /= static_cast<double>(count);
  return acc;
}

DriftSeries drift_curve(const HiddenStates& hidden, std::int64_t anchor_step, int window,
                        std::vector<std::int64_t> probe_steps) {
  DriftSeries out;
  out.anchor_step = anchor_step;
  out.window = window;
  const auto anchor = window_mean(hidden, anchor_step, window);
  if (probe_steps.empty()) {
    for (std::int64_t t = anchor_step; t <= static_cast<std::int64_t>(hidden.size()); t += window)
      probe_steps.push_back(t);
  }
  for (std::int64_t t : probe_steps) {
    out.steps.push_back(t);
    // Anchor self-similarity is 1 by definition, not subject to rounding.
    out.similarities.push_back(t == anchor_step ? 1.0
                                                : cosine_similarity(anchor, window_mean(hidden, t, window)));
  }
  return out;
}

}  // namespace steady::metrics
