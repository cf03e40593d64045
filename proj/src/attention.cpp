#include "steady/attention.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steady::attention {

namespace {

float read_f32le(const char* p) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<float>(bits);
}

void write_f32le(std::string& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>(bits & 0xFF));
    bits >>= 8;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_index(std::string_view s, int line_no) {
  s = trim(s);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw FormatError("span line " + std::to_string(line_no) + ": bad index '" + std::string(s) + "'");
  return std::stoll(std::string(s));
}

}  // namespace

TraceValidationError::TraceValidationError(int layer, std::int64_t step, double row_sum)
    : std::runtime_error("attention row (layer " + std::to_string(layer + 1) + ", step " +
                         std::to_string(step) + ") sums to " + std::to_string(row_sum)),
      layer_(layer),
      step_(step) {}

std::size_t AttentionTrace::rows_per_layer_size() const noexcept {
  // sum_{t=1..T} (T0 + t - 1)
  return static_cast<std::size_t>(T * T0 + T * (T - 1) / 2);
}

namespace {
std::size_t row_offset(const AttentionTrace& tr, int layer, std::int64_t t) {
  const std::int64_t before = (t - 1) * tr.T0 + (t - 1) * (t - 2) / 2;
  return static_cast<std::size_t>(layer) * tr.rows_per_layer_size() + static_cast<std::size_t>(before);
}
}  // namespace

std::span<const float> AttentionTrace::row(int layer, std::int64_t t) const {
  if (layer < 0 || layer >= L || t < 1 || t > T) throw ArgumentError("trace row out of range");
  return {values.data() + row_offset(*this, layer, t), static_cast<std::size_t>(row_length(t))};
}

std::span<float> AttentionTrace::row(int layer, std::int64_t t) {
  if (layer < 0 || layer >= L || t < 1 || t > T) throw ArgumentError("trace row out of range");
  return {values.data() + row_offset(*this, layer, t), static_cast<std::size_t>(row_length(t))};
}

void AttentionTrace::allocate() {
  if (L < 1 || T < 0 || T0 < 1) throw ArgumentError("trace needs L >= 1, T0 >= 1, T >= 0");
  values.assign(static_cast<std::size_t>(L) * rows_per_layer_size(), 0.0f);
}

void AttentionTrace::validate(double tol) const {
  for (int l = 0; l < L; ++l)
    for (std::int64_t t = 1; t <= T; ++t) {
      double sum = 0.0;
      for (float v : row(l, t)) sum += v;
      if (!(std::abs(sum - 1.0) <= tol)) throw TraceValidationError(l, t, sum);
    }
}

AttentionTrace parse_trace(std::string_view bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw FormatError("trace: missing header line");
  const auto header = nlohmann::json::parse(bytes.substr(0, nl), nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw FormatError("trace: header is not a JSON object");

  AttentionTrace tr;
  try {
    if (header.at("format_version").get<int>() != 1) throw FormatError("trace: unsupported format_version");
    if (header.at("dtype").get<std::string>() != "f32le") throw FormatError("trace: dtype must be f32le");
    tr.L = header.at("L").get<int>();
    tr.N = header.at("N").get<int>();
    tr.T0 = header.at("T0").get<std::int64_t>();
    tr.T = header.at("T").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("trace header: ") + e.what());
  }
  if (tr.L < 1 || tr.N < 1 || tr.T0 < 1 || tr.T < 0) throw FormatError("trace: non-positive dimension");

  const std::size_t count = static_cast<std::size_t>(tr.L) * tr.rows_per_layer_size();
  const auto payload = bytes.substr(nl + 1);
  if (payload.size() != count * 4)
    throw FormatError("trace: payload has " + std::to_string(payload.size()) + " bytes, header implies " +
                      std::to_string(count * 4));
  tr.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) tr.values[i] = read_f32le(payload.data() + 4 * i);
  tr.validate();
  return tr;
}

AttentionTrace load_trace(const std::filesystem::path& path) { return parse_trace(read_file(path)); }

std::string serialize_trace(const AttentionTrace& trace) {
  nlohmann::json header = {{"format_version", 1}, {"L", trace.L},   {"N", trace.N},
                           {"T0", trace.T0},      {"T", trace.T},   {"dtype", "f32le"}};
  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + trace.values.size() * 4);
  for (float v : trace.values) write_f32le(out, v);
  return out;
}

void save_trace(const std::filesystem::path& path, const AttentionTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const auto bytes = serialize_trace(trace);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::int64_t> ConstraintSpan::all() const {
  std::vector<std::int64_t> out;
  for (const auto& r : regions) out.insert(out.end(), r.indices.begin(), r.indices.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConstraintSpan parse_span(std::string_view text) {
  ConstraintSpan span;
  int line_no = 0;
  std::size_t p = 0;
  while (p < text.size()) {
    auto nl = text.find('\n', p);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(p, nl - p);
    p = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    ConstraintRegion region;
    if (auto colon = line.find(':'); colon != std::string_view::npos) {
      region.name = std::string(trim(line.substr(0, colon)));
      line = line.substr(colon + 1);
    } else {
      region.name = "r" + std::to_string(span.regions.size() + 1);
    }
    std::size_t q = 0;
    while (q <= line.size()) {
      auto comma = line.find(',', q);
      if (comma == std::string_view::npos) comma = line.size();
      const auto item = trim(line.substr(q, comma - q));
      q = comma + 1;
      if (item.empty()) continue;
      if (auto dash = item.find('-'); dash != std::string_view::npos) {
        const auto a = parse_index(item.substr(0, dash), line_no);
        const auto b = parse_index(item.substr(dash + 1), line_no);
        if (a > b) throw FormatError("span line " + std::to_string(line_no) + ": descending range");
        for (auto i = a; i <= b; ++i) region.indices.push_back(i);
      } else {
        region.indices.push_back(parse_index(item, line_no));
      }
    }
    if (region.indices.empty()) throw FormatError("span line " + std::to_string(line_no) + ": no indices");
    span.regions.push_back(std::move(region));
  }
  return span;
}

ConstraintSpan load_span(const std::filesystem::path& path) { return parse_span(read_file(path)); }

std::string_view to_string(LayerConvention c) noexcept {
  return c == LayerConvention::all_layers ? "all_layers" : "exclude_last";
}

AttentionSeries constraint_attention(const AttentionTrace& trace, std::span<const std::int64_t> span,
                                     LayerConvention convention) {
  if (span.empty()) throw ArgumentError("constraint_attention: empty constraint span");
  for (auto j : span)
    if (j < 1 || j > trace.T0)
      throw ArgumentError("constraint_attention: index " + std::to_string(j) + " outside the prompt");

  AttentionSeries out;
  out.convention = convention;
  out.layers_used = convention == LayerConvention::exclude_last && trace.L > 1 ? trace.L - 1 : trace.L;
  out.values.assign(static_cast<std::size_t>(trace.T), 0.0);
  const double inv_c = 1.0 / static_cast<double>(span.size());
  for (std::int64_t t = 1; t <= trace.T; ++t) {
    double acc = 0.0;
    for (int l = 0; l < out.layers_used; ++l) {
      const auto r = trace.row(l, t);
      double a = 0.0;
      for (auto j : span) a += r[static_cast<std::size_t>(j - 1)];
      acc += a * inv_c;
    }
    out.values[static_cast<std::size_t>(t - 1)] = acc / out.layers_used;
  }
  return out;
}

AttentionSeries constraint_attention(const AttentionTrace& trace, const ConstraintSpan& span,
                                     LayerConvention convention) {
  const auto c = span.all();
  return constraint_attention(trace, c, convention);
}

std::optional<std::int64_t> detect_collapse(std::span<const double> series, const CollapseParams& params) {
  if (params.window < 1 || params.baseline_span < 1) throw ArgumentError("detect_collapse: bad params");
  const auto n = static_cast<std::int64_t>(series.size());
  if (n < params.window) return std::nullopt;

  const std::int64_t base_n = std::min(params.baseline_span, n);
  double base = 0.0;
  for (std::int64_t i = 0; i < base_n; ++i) base += series[static_cast<std::size_t>(i)];
  base /= static_cast<double>(base_n);
  if (!(base > 0.0)) return std::nullopt;
  const double threshold = params.eps_rel * base;

  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + series[static_cast<std::size_t>(i)];
  auto window_mean = [&](std::int64_t s) {  // window [s, s + W) over 0-based indices
    return (prefix[static_cast<std::size_t>(s + params.window)] - prefix[static_cast<std::size_t>(s)]) /
           static_cast<double>(params.window);
  };

  std::int64_t s = n - params.window;
  if (!(window_mean(s) < threshold)) return std::nullopt;
  while (s > 0 && window_mean(s - 1) < threshold) --s;
  return s + 1;
}

std::vector<std::int64_t> detect_instability(std::span<const double> series, const InstabilityParams& params) {
  if (params.median_window < 1 || !(params.k > 0)) throw ArgumentError("detect_instability: bad params");
  const auto n = static_cast<std::int64_t>(series.size());
  const std::int64_t min_history = std::max<std::int64_t>(1, params.median_window / 4);

  std::vector<bool> flagged(static_cast<std::size_t>(n), false);
  std::vector<double> buf;
  for (std::int64_t i = min_history; i < n; ++i) {
    const std::int64_t from = std::max<std::int64_t>(0, i - params.median_window);
    buf.assign(series.begin() + from, series.begin() + i);
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    double median = *mid;
    if (buf.size() % 2 == 0) median = 0.5 * (median + *std::max_element(buf.begin(), mid));
    if (median > 0.0 && series[static_cast<std::size_t>(i)] > params.k * median)
      flagged[static_cast<std::size_t>(i)] = true;
  }

  std::vector<std::int64_t> events;
  for (std::int64_t i = 0; i < n;) {
    if (!flagged[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    std::int64_t peak = i;
    while (i < n && flagged[static_cast<std::size_t>(i)]) {
      if (series[static_cast<std::size_t>(i)] > series[static_cast<std::size_t>(peak)]) peak = i;
      ++i;
    }
    events.push_back(peak + 1);
  }
  return events;
}

}  // namespace steady::attention
