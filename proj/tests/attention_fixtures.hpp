#pragma once

// Synthetic constraint-attention series and traces built around them.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "steady/attention.hpp"

namespace fixtures {

// Periodic section-start peaks every 40 steps through step 1480, low
// background until 1500, then near zero until `steps`.
inline std::vector<double> collapse_series(std::int64_t steps = 2000) {
  std::vector<double> s(static_cast<std::size_t>(steps));
  for (std::int64_t t = 1; t <= steps; ++t) {
    double v = 1e-4;
    if (t <= 1500) v = 0.002;
    if (t <= 1480 && t % 40 == 0) v = 0.6;
    s[static_cast<std::size_t>(t - 1)] = v;
  }
  return s;
}

// Smooth oscillation around 0.1 with one 5x spike at `spike_step`.
inline std::vector<double> spike_series(std::int64_t steps = 1500, std::int64_t spike_step = 750) {
  std::vector<double> s(static_cast<std::size_t>(steps));
  for (std::int64_t t = 1; t <= steps; ++t) {
    double v = 0.1 * (1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 37.0));
    if (t == spike_step) v *= 5.0;
    s[static_cast<std::size_t>(t - 1)] = v;
  }
  return s;
}

// Trace whose rows put `series[t-1]` on each span position and spread the
// remaining mass uniformly over the other positions.
inline steady::attention::AttentionTrace trace_from_series(const std::vector<double>& series,
                                                           const std::vector<std::int64_t>& span, int layers = 2,
                                                           std::int64_t t0 = 8) {
  steady::attention::AttentionTrace tr;
  tr.L = layers;
  tr.N = 4;
  tr.T0 = t0;
  tr.T = static_cast<std::int64_t>(series.size());
  tr.allocate();
  for (int l = 0; l < layers; ++l)
    for (std::int64_t t = 1; t <= tr.T; ++t) {
      auto row = tr.row(l, t);
      const double v = series[static_cast<std::size_t>(t - 1)];
      const double rest = (1.0 - v * static_cast<double>(span.size())) /
                          static_cast<double>(row.size() - span.size());
      for (auto& x : row) x = static_cast<float>(rest);
      for (auto j : span) row[static_cast<std::size_t>(j - 1)] = static_cast<float>(v);
    }
  return tr;
}

inline steady::attention::AttentionTrace uniform_trace(int layers, std::int64_t t0, std::int64_t steps) {
  steady::attention::AttentionTrace tr;
  tr.L = layers;
  tr.T0 = t0;
  tr.T = steps;
  tr.allocate();
  for (int l = 0; l < layers; ++l)
    for (std::int64_t t = 1; t <= steps; ++t) {
      auto row = tr.row(l, t);
      for (auto& x : row) x = static_cast<float>(1.0 / static_cast<double>(row.size()));
    }
  return tr;
}

}  // namespace fixtures
