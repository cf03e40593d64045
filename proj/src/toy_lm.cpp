#include "steady/toy_lm.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace steady::toy {

namespace {

constexpr std::array<std::string_view, 48> kContentWords = {
    "river",   "stone",   "light",   "forest",  "village", "lantern",  "harvest", "orchard",
    "cider",   "storm",   "silver",  "morning", "journey", "letter",   "garden",  "bridge",
    "window",  "shadow",  "market",  "winter",  "summer",  "castle",   "meadow",  "candle",
    "whisper", "mountain", "ocean",  "secret",  "friend",  "quiet",    "ancient", "bright",
    "wander",  "gather",  "remember", "listen", "follow",  "open",     "carry",   "build",
    "travel",  "dream",   "echo",    "path",    "song",    "door",     "field",   "tower"};

// Marks the number slot inside a header template.
constexpr token_id kNumberSlot = -2;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

std::string_view to_string(HeaderFamily family) noexcept {
  switch (family) {
    case HeaderFamily::chapter: return "chapter";
    case HeaderFamily::round: return "round";
    case HeaderFamily::day: return "day";
    case HeaderFamily::floor: return "floor";
  }
  return "chapter";
}

std::string_view to_string(FailureMode mode) noexcept {
  switch (mode) {
    case FailureMode::none: return "none";
    case FailureMode::eos_ramp: return "eos_ramp";
    case FailureMode::loop: return "loop";
    case FailureMode::skip: return "skip";
    case FailureMode::filler: return "filler";
  }
  return "none";
}

FailureMode parse_failure_mode(std::string_view name) {
  for (auto m : {FailureMode::none, FailureMode::eos_ramp, FailureMode::loop, FailureMode::skip,
                 FailureMode::filler})
    if (to_string(m) == name) return m;
  throw ArgumentError("unknown failure mode: " + std::string(name));
}

std::string_view to_string(StopReason reason) noexcept {
  return reason == StopReason::eos ? "eos" : "max_steps";
}

// ---------------------------------------------------------------------------
// Vocabulary

ToyVocab::ToyVocab() {
  eos_ = add("");
  period_ = add(".");
  newline_ = add("\n");
  paragraph_ = add("\n\n");
  colon_ = add(":");
  glyph_ = add("#*#");
  for (auto w : {"Chapter", "Round", "Date", "Day", "Floor"}) add(w);
  stars_ = add("***");
  add("finished");
  for (auto w : {"I", "hope", "these"}) add(w);
  content_begin_ = static_cast<token_id>(surfaces_.size());
  for (auto w : kContentWords) add(std::string(w));
  content_end_ = static_cast<token_id>(surfaces_.size());
  number_begin_ = static_cast<token_id>(surfaces_.size());
  for (int n = 1; n <= kMaxSectionNumber; ++n) add(std::to_string(n));
}

token_id ToyVocab::add(std::string surface) {
  const auto id = static_cast<token_id>(surfaces_.size());
  if (!surface.empty()) index_.emplace(surface, id);
  surfaces_.push_back(std::move(surface));
  return id;
}

std::optional<token_id> ToyVocab::lookup(std::string_view surface) const {
  auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

token_id ToyVocab::id(std::string_view surface) const {
  if (auto t = lookup(surface)) return *t;
  throw ArgumentError("token not in toy vocabulary: '" + std::string(surface) + "'");
}

token_id ToyVocab::number(int n) const {
  if (n < 1 || n > kMaxSectionNumber) throw ArgumentError("section number out of toy range");
  return number_begin_ + n - 1;
}

bool ToyVocab::word_like(token_id id) const noexcept {
  return id != eos_ && id != period_ && id != colon_ && id != newline_ && id != paragraph_;
}

std::vector<token_id> ToyVocab::title(HeaderFamily family, int section) const {
  switch (family) {
    case HeaderFamily::chapter: return {glyph_, id("Chapter"), number(section), colon_};
    case HeaderFamily::round: return {glyph_, id("Round"), number(section), colon_};
    case HeaderFamily::day: return {glyph_, id("Date"), colon_, id("Day"), number(section), colon_};
    case HeaderFamily::floor: return {glyph_, id("Floor"), number(section), colon_};
  }
  return {};
}

std::vector<token_id> ToyVocab::end_marker() const { return {stars_, id("finished"), stars_}; }

std::vector<token_id> ToyVocab::filler_phrase() const { return {id("I"), id("hope"), id("these")}; }

std::vector<token_id> ToyVocab::interruptions() const { return {period_, newline_, paragraph_}; }

std::string ToyVocab::detokenize(std::span<const token_id> tokens) const {
  std::string out;
  token_id prev = kStartToken;
  for (token_id t : tokens) {
    if (t == eos_) continue;
    if (prev != kStartToken && word_like(t) && prev != newline_ && prev != paragraph_) out += ' ';
    out += surface(t);
    prev = t;
  }
  return out;
}

std::vector<token_id> ToyVocab::tokenize(std::string_view text) const {
  std::vector<token_id> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      if (i + 1 < text.size() && text[i + 1] == '\n') {
        out.push_back(paragraph_);
        i += 2;
      } else {
        out.push_back(newline_);
        ++i;
      }
    } else if (c == ' ') {
      ++i;
    } else if (c == '.') {
      out.push_back(period_);
      ++i;
    } else if (c == ':') {
      out.push_back(colon_);
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j]) && text[j] != '.' && text[j] != ':') ++j;
      out.push_back(id(text.substr(i, j - i)));
      i = j;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model

void ToyConfig::validate() const {
  if (ramp_slope < 0) throw ConfigError("ramp_slope", "must be >= 0");
  if (loop_window < 1) throw ConfigError("loop_window", "must be >= 1");
  if (skip_after_section < 1) throw ConfigError("skip_after_section", "must be >= 1");
  if (target_sections < 1 || target_sections > ToyVocab::kMaxSectionNumber)
    throw ConfigError("target_sections", "must be in [1, 500]");
  if (section_tokens < 1) throw ConfigError("section_tokens", "must be >= 1");
  if (!(base_temperature > 0)) throw ConfigError("base_temperature", "must be > 0");
  if (!(format_temperature > 0)) throw ConfigError("format_temperature", "must be > 0");
}

ToyModel::ToyModel(const ToyVocab& vocab, ToyConfig config) : vocab_(vocab), config_(config) {
  config_.validate();
  const auto n_content = static_cast<std::size_t>(vocab_.content_end() - vocab_.content_begin());
  std::mt19937_64 rng(config_.model_seed);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  table_.assign(n_content + 1, std::vector<double>(n_content));
  for (auto& row : table_)
    for (auto& v : row) v = dist(rng);
}

std::vector<token_id> ToyModel::primer() const { return vocab_.title(config_.header_family, 1); }

std::vector<token_id> ToyModel::header_after_glyph() const {
  auto t = vocab_.title(config_.header_family, 1);
  for (auto& tok : t)
    if (vocab_.is_number(tok)) tok = kNumberSlot;
  return t;
}

bool ToyModel::in_format_mode() const noexcept {
  return state_.header_pos > 0 || state_.marker_pos > 0;
}

double ToyModel::temperature() const noexcept {
  return in_format_mode() ? config_.format_temperature : config_.base_temperature;
}

std::vector<double> ToyModel::logits() const {
  const auto& s = state_;
  std::vector<double> l(vocab_.size(), kFloor);

  double eos = config_.eos_base_logit;
  if (config_.failure_mode == FailureMode::eos_ramp)
    eos += config_.ramp_slope * static_cast<double>(std::max<std::int64_t>(0, s.steps - config_.ramp_start));

  constexpr double kExpected = 4.0;
  if (s.header_pos > 0) {
    const auto tmpl = header_after_glyph();
    const token_id want = tmpl[static_cast<std::size_t>(s.header_pos)];
    if (want == kNumberSlot) {
      const int next = std::min(s.section + 1, ToyVocab::kMaxSectionNumber);
      l[static_cast<std::size_t>(vocab_.number(next))] = kExpected;
      const bool skipping = config_.failure_mode == FailureMode::skip &&
                            s.section >= config_.skip_after_section &&
                            next < config_.target_sections;
      if (skipping)
        l[static_cast<std::size_t>(vocab_.number(config_.target_sections))] =
            kExpected + config_.skip_bonus;
    } else {
      l[static_cast<std::size_t>(want)] = kExpected;
    }
    l[static_cast<std::size_t>(vocab_.eos())] = eos;
    return l;
  }
  if (s.marker_pos > 0) {
    const auto marker = vocab_.end_marker();
    l[static_cast<std::size_t>(marker[static_cast<std::size_t>(s.marker_pos)])] = kExpected;
    l[static_cast<std::size_t>(vocab_.eos())] = eos;
    return l;
  }

  const token_id prev = s.last;
  const bool prev_content = vocab_.is_content(prev);
  const bool prev_break = prev == vocab_.period() || prev == vocab_.newline() ||
                          prev == vocab_.paragraph();
  const bool prev_newline = prev == vocab_.newline() || prev == vocab_.paragraph() ||
                            prev == kStartToken;

  const auto& row = table_[prev_content ? static_cast<std::size_t>(prev - vocab_.content_begin() + 1) : 0];
  for (token_id w = vocab_.content_begin(); w < vocab_.content_end(); ++w)
    l[static_cast<std::size_t>(w)] = row[static_cast<std::size_t>(w - vocab_.content_begin())];

  // A collapsed model rarely finishes a sentence.
  if (prev_content)
    l[static_cast<std::size_t>(vocab_.period())] =
        s.collapsed ? -2.0 : std::min(6.0, -4.0 + 0.7 * s.sentence_len);

  if (prev_newline) {
    l[static_cast<std::size_t>(vocab_.newline())] = kMask;
    l[static_cast<std::size_t>(vocab_.paragraph())] = kMask;
  } else if (prev == vocab_.period()) {
    l[static_cast<std::size_t>(vocab_.newline())] = 1.0;
    l[static_cast<std::size_t>(vocab_.paragraph())] = 0.0;
  } else if (prev == vocab_.colon()) {
    l[static_cast<std::size_t>(vocab_.newline())] = 8.0;
  }

  const bool budget_spent = s.section_len >= config_.section_tokens;
  // A collapsed model no longer moves on to the next section by itself.
  if (prev_break && budget_spent) {
    if (s.section < config_.target_sections) {
      if (!s.collapsed)
      l[static_cast<std::size_t>(vocab_.header_glyph())] =
          -6.0 + 0.3 * (s.section_len - config_.section_tokens);
    } else if (!s.marker_done) {
      l[static_cast<std::size_t>(vocab_.marker_stars())] = 7.0;
    }
  }

  if (config_.failure_mode == FailureMode::filler) {
    const auto phrase = vocab_.filler_phrase();
    const bool section_start = s.section_len <= 2 && (prev_newline || prev == vocab_.colon());
    if (section_start) l[static_cast<std::size_t>(phrase[0])] = config_.filler_bonus;
    if (prev == phrase[0]) l[static_cast<std::size_t>(phrase[1])] = config_.filler_bonus;
    if (prev == phrase[1]) l[static_cast<std::size_t>(phrase[2])] = config_.filler_bonus;
  }

  if (s.collapsed && s.history.size() >= static_cast<std::size_t>(config_.loop_window)) {
    const token_id echo = s.history[s.history.size() - static_cast<std::size_t>(config_.loop_window)];
    auto& v = l[static_cast<std::size_t>(echo)];
    if (v != kMask) v += config_.loop_bonus;
  }

  if (s.marker_done) eos += 20.0;
  l[static_cast<std::size_t>(vocab_.eos())] = eos;
  return l;
}

void ToyModel::observe(token_id token) {
  auto& s = state_;
  ++s.steps;
  ++s.section_len;
  s.history.push_back(token);

  bool consumed = false;
  if (s.header_pos > 0) {
    const auto tmpl = header_after_glyph();
    const token_id want = tmpl[static_cast<std::size_t>(s.header_pos)];
    const bool ok = want == kNumberSlot ? vocab_.is_number(token) : token == want;
    if (ok) {
      consumed = true;
      if (++s.header_pos == static_cast<int>(tmpl.size())) {
        const auto& hist = s.history;
        int number = s.section;
        for (auto it = hist.rbegin(); it != hist.rend(); ++it)
          if (vocab_.is_number(*it)) { number = vocab_.number_value(*it); break; }
        s.section = number;
        s.section_len = 0;
        s.sentence_len = 0;
        s.header_pos = 0;
        s.collapsed = false;
      }
    } else {
      s.header_pos = 0;
    }
  } else if (s.marker_pos > 0) {
    const auto marker = vocab_.end_marker();
    if (token == marker[static_cast<std::size_t>(s.marker_pos)]) {
      consumed = true;
      if (++s.marker_pos == static_cast<int>(marker.size())) {
        s.marker_pos = 0;
        s.marker_done = true;
      }
    } else {
      s.marker_pos = 0;
    }
  }

  if (!consumed) {
    if (token == vocab_.header_glyph()) {
      s.header_pos = 1;
    } else if (token == vocab_.marker_stars()) {
      s.marker_pos = 1;
    }
    if (vocab_.is_content(token)) {
      ++s.sentence_len;
      s.last_content = token;
    } else if (token == vocab_.period() || token == vocab_.newline() || token == vocab_.paragraph()) {
      s.sentence_len = 0;
    }
  }

  if (config_.failure_mode == FailureMode::loop && s.header_pos == 0 &&
      s.section_len >= config_.loop_onset)
    s.collapsed = true;
  s.last = token;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<double> adjusted_probabilities(std::span<const double> logits,
                                           const LogitAdjustment& adjustment, double temperature) {
  std::vector<double> p(logits.begin(), logits.end());
  apply_adjustment(p, adjustment);
  const double inv_t = temperature > 0 ? 1.0 / temperature : 1.0;
  double max_v = kMask;
  for (double v : p) max_v = std::max(max_v, v);
  if (max_v == kMask) throw ImpossibleDistribution();
  double total = 0.0;
  for (double& v : p) {
    v = (v == kMask) ? 0.0 : std::exp((v - max_v) * inv_t);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

token_id sample(std::span<const double> logits, const LogitAdjustment& adjustment,
                double temperature, std::mt19937_64& rng) {
  if (temperature <= 0) {
    std::vector<double> adj(logits.begin(), logits.end());
    apply_adjustment(adj, adjustment);
    const auto it = std::max_element(adj.begin(), adj.end());  // first max wins ties
    if (*it == kMask) throw ImpossibleDistribution();
    return static_cast<token_id>(it - adj.begin());
  }
  const auto p = adjusted_probabilities(logits, adjustment, temperature);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  token_id last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last_positive = static_cast<token_id>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

// ---------------------------------------------------------------------------
// Decode loop

GuidanceConfig toy_guidance(const ToyVocab& vocab, int total_sections, int section_token_budget,
                            HeaderFamily family, int grace) {
  GuidanceConfig cfg;
  cfg.total_sections = total_sections;
  cfg.section_token_budget = section_token_budget;
  cfg.grace = grace;
  cfg.interruption_tokens = vocab.interruptions();
  cfg.banned_phrases = {vocab.filler_phrase()};
  cfg.title_template = [&vocab, family](int p) { return vocab.title(family, p); };
  cfg.eos_token = vocab.eos();
  cfg.end_marker = vocab.end_marker();
  return cfg;
}

GenerationResult run_generation(const ToyVocab& vocab, const ToyConfig& config,
                                const std::optional<GuidanceConfig>& guidance,
                                std::int64_t max_steps) {
  if (max_steps < 1) throw ArgumentError("run_generation: max_steps must be >= 1");
  ToyModel model(vocab, config);
  std::mt19937_64 rng(config.seed);

  GenerationResult out;
  out.tokens = model.primer();
  out.primer_length = out.tokens.size();
  for (token_id t : out.tokens) model.observe(t);

  std::optional<Session> session;
  if (guidance) session.emplace(*guidance);

  token_id last = kStartToken;
  int toy_section = model.state().section;
  for (std::int64_t step = 0; step < max_steps; ++step) {
    LogitAdjustment adj;
    if (session) adj = session->step(last);
    const token_id tok = sample(model.logits(), adj, model.temperature(), rng);
    if (!adj.events.empty()) out.events.push_back({step, tok, adj.events});
    ++out.generated_tokens;
    if (tok == vocab.eos()) {
      if (session) session->observe(tok);
      out.stop_reason = StopReason::eos;
      break;
    }
    out.tokens.push_back(tok);
    model.observe(tok);
    last = tok;
    if (!session && model.state().section != toy_section) {
      toy_section = model.state().section;
      out.boundaries.push_back({toy_section, step + 1});
    }
  }
  if (session) out.boundaries = session->state().boundaries;
  return out;
}

}  // namespace steady::toy
