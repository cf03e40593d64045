#pragma once

// Constraint-attention series from dumped attention rows, plus detectors for
// sustained collapse and isolated spikes.
//
// Trace file layout: one UTF-8 JSON header line
//   {"format_version":1,"L":..,"N":..,"T0":..,"T":..,"dtype":"f32le"}
// followed by L*T rows of little-endian float32, layer-major then step-minor.
// The row for step t (1-based) has T0+t-1 entries and is already averaged
// over the N heads.
//
// Span sidecar: one region per line, "name: 3-7, 12" (1-based, inclusive);
// '#' starts a comment.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steady/common.hpp"

namespace steady::attention {

class TraceValidationError : public std::runtime_error {
 public:
  TraceValidationError(int layer, std::int64_t step, double row_sum);
  int layer() const noexcept { return layer_; }
  std::int64_t step() const noexcept { return step_; }

 private:
  int layer_;
  std::int64_t step_;
};

struct AttentionTrace {
  int L = 0;
  int N = 1;
  std::int64_t T0 = 0;
  std::int64_t T = 0;
  std::vector<float> values;

  std::int64_t row_length(std::int64_t t) const noexcept { return T0 + t - 1; }
  std::size_t rows_per_layer_size() const noexcept;
  std::span<const float> row(int layer, std::int64_t t) const;  // layer 0-based, t 1-based
  std::span<float> row(int layer, std::int64_t t);

  // Allocates zeroed storage for the current L, T0, T.
  void allocate();
  // Throws TraceValidationError naming the first row whose sum is off by more than `tol`.
  void validate(double tol = 1e-4) const;
};

AttentionTrace load_trace(const std::filesystem::path& path);
AttentionTrace parse_trace(std::string_view bytes);
void save_trace(const std::filesystem::path& path, const AttentionTrace& trace);
std::string serialize_trace(const AttentionTrace& trace);

struct ConstraintRegion {
  std::string name;
  std::vector<std::int64_t> indices;  // 1-based prompt positions
};

struct ConstraintSpan {
  std::vector<ConstraintRegion> regions;
  std::vector<std::int64_t> all() const;  // sorted union
};

ConstraintSpan parse_span(std::string_view text);
ConstraintSpan load_span(const std::filesystem::path& path);

// Which layers enter the layer average. exclude_last drops the final layer.
enum class LayerConvention { all_layers, exclude_last };

std::string_view to_string(LayerConvention c) noexcept;

struct AttentionSeries {
  std::vector<double> values;  // values[t - 1]
  LayerConvention convention = LayerConvention::all_layers;
  int layers_used = 0;
};

AttentionSeries constraint_attention(const AttentionTrace& trace, std::span<const std::int64_t> span,
                                     LayerConvention convention = LayerConvention::all_layers);
AttentionSeries constraint_attention(const AttentionTrace& trace, const ConstraintSpan& span,
                                     LayerConvention convention = LayerConvention::all_layers);

struct CollapseParams {
  std::int64_t baseline_span = 500;
  double eps_rel = 0.1;
  std::int64_t window = 200;
};

// First step s such that every full window starting at or after s has a mean
// below eps_rel times the baseline mean. Steps are 1-based.
std::optional<std::int64_t> detect_collapse(std::span<const double> series,
                                            const CollapseParams& params = {});

struct InstabilityParams {
  double k = 3.0;
  std::int64_t median_window = 200;
};

// Steps whose value exceeds k times the median of the preceding window; runs of
// consecutive flagged steps collapse to their peak.
std::vector<std::int64_t> detect_instability(std::span<const double> series,
                                             const InstabilityParams& params = {});

}  // namespace steady::attention
