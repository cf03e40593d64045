#include "steady/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace steady {

void GuidanceConfig::validate() const {
  if (section_token_budget < 1)
    throw ConfigError("section_token_budget", "must be >= 1");
  if (grace < 0) throw ConfigError("grace", "must be >= 0");
  if (!(boost > 0.0) || !std::isfinite(boost))
    throw ConfigError("boost", "must be a finite positive value");
  if (interruption_tokens.empty())
    throw ConfigError("interruption_tokens", "must not be empty");
  if (checkpoint_bounds.low < 1 || checkpoint_bounds.low > checkpoint_bounds.high)
    throw ConfigError("checkpoint_bounds", "need 1 <= low <= high");
  for (const auto& phrase : banned_phrases)
    if (phrase.empty()) throw ConfigError("banned_phrases", "empty phrase");
  if (mode == GuidanceMode::free_form) {
    if (freeform_target_tokens < 1)
      throw ConfigError("freeform_target_tokens", "free-form mode requires a positive target");
  } else {
    if (total_sections < 1) throw ConfigError("total_sections", "must be >= 1");
    if (total_sections > 1 && !title_template)
      throw ConfigError("title_template", "required when total_sections > 1");
  }
}

std::string_view to_string(GuidanceEvent event) noexcept {
  switch (event) {
    case GuidanceEvent::soft_trigger: return "soft_trigger";
    case GuidanceEvent::hard_trigger: return "hard_trigger";
    case GuidanceEvent::section_advanced: return "section_advanced";
    case GuidanceEvent::eos_unbanned: return "eos_unbanned";
    case GuidanceEvent::title_in_progress: return "title_in_progress";
  }
  return "unknown";
}

const BiasEntry* LogitAdjustment::find(token_id token) const noexcept {
  auto it = std::lower_bound(entries.begin(), entries.end(), token,
                             [](const BiasEntry& e, token_id t) { return e.token < t; });
  return (it != entries.end() && it->token == token) ? &*it : nullptr;
}

bool LogitAdjustment::has_event(GuidanceEvent event) const noexcept {
  return std::find(events.begin(), events.end(), event) != events.end();
}

namespace {

bool feasible_width(std::int64_t target, std::int64_t k, CheckpointBounds b) {
  const std::int64_t lo = target / k;
  const std::int64_t hi = lo + (target % k ? 1 : 0);
  return lo >= b.low && hi <= b.high;
}

std::int64_t width_violation(std::int64_t target, std::int64_t k, CheckpointBounds b) {
  const std::int64_t lo = target / k;
  const std::int64_t hi = lo + (target % k ? 1 : 0);
  return std::max<std::int64_t>(0, b.low - lo) + std::max<std::int64_t>(0, hi - b.high);
}

void insert_entry(std::vector<BiasEntry>& entries, BiasEntry entry) {
  auto it = std::lower_bound(entries.begin(), entries.end(), entry.token,
                             [](const BiasEntry& e, token_id t) { return e.token < t; });
  if (it != entries.end() && it->token == entry.token) {
    if (entry.masked()) it->bias = kMask;
    return;
  }
  entries.insert(it, entry);
}

}  // namespace

std::vector<std::int64_t> freeform_checkpoints(std::int64_t target, CheckpointBounds bounds) {
  if (target < 1) throw ArgumentError("freeform_checkpoints: target must be >= 1");
  if (bounds.low > bounds.high) throw ArgumentError("freeform_checkpoints: low > high");
  if (target < bounds.low) return {target};

  const double mid = 0.5 * (bounds.low + bounds.high);
  const double ideal = static_cast<double>(target) / mid;
  std::int64_t k = std::max<std::int64_t>(1, std::llround(ideal));
  if (!feasible_width(target, k, bounds)) {
    // The rounded count can miss the band near its edges; take the closest
    // count that fits, or the least-violating one when none does.
    const std::int64_t k_max = target / std::max(1, bounds.low) + 1;
    std::int64_t best = k;
    for (std::int64_t cand = 1; cand <= k_max; ++cand) {
      const auto v_c = width_violation(target, cand, bounds);
      const auto v_b = width_violation(target, best, bounds);
      if (v_c < v_b || (v_c == v_b && std::abs(cand - ideal) < std::abs(best - ideal)))
        best = cand;
    }
    k = best;
  }

  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  const std::int64_t base = target / k;
  const std::int64_t extra = target % k;
  std::int64_t pos = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    pos += base + (i < extra ? 1 : 0);
    out.push_back(pos);
  }
  return out;
}

Session::Session(GuidanceConfig config) : config_(std::move(config)) {
  config_.validate();

  if (config_.mode == GuidanceMode::free_form) {
    state_.checkpoints = freeform_checkpoints(config_.freeform_target_tokens,
                                              config_.checkpoint_bounds);
    total_sections_ = static_cast<int>(state_.checkpoints.size());
  } else {
    total_sections_ = config_.total_sections;
    titles_.resize(static_cast<std::size_t>(total_sections_) + 1);
    for (int p = 2; p <= total_sections_; ++p) {
      auto title = config_.title_template(p);
      if (title.empty())
        throw ConfigError("title_template", "empty title for section " + std::to_string(p));
      titles_[static_cast<std::size_t>(p)] = PrefixMatcher<token_id>(std::move(title));
    }
    end_marker_ = PrefixMatcher<token_id>(config_.end_marker);
  }

  for (const auto& phrase : config_.banned_phrases)
    banned_window_ = std::max(banned_window_, phrase.size() - 1);
  if (config_.mode == GuidanceMode::sectioned && config_.end_marker.empty())
    state_.end_marker_done = true;
}

std::span<const token_id> Session::pending_title() const noexcept {
  if (config_.mode == GuidanceMode::free_form || state_.section >= total_sections_) return {};
  return titles_[static_cast<std::size_t>(state_.section) + 1].pattern();
}

bool Session::is_interruption(token_id token) const noexcept {
  const auto& v = config_.interruption_tokens;
  return std::find(v.begin(), v.end(), token) != v.end();
}

bool Session::structural_active() const noexcept {
  return !state_.finished && state_.section < total_sections_;
}

bool Session::eos_masked() const noexcept {
  if (config_.mode == GuidanceMode::free_form)
    return state_.steps < config_.freeform_target_tokens;
  return state_.section < total_sections_ || !state_.end_marker_done;
}

bool Session::struct_condition(token_id last_token) const {
  if (!structural_active()) return false;
  if (config_.mode == GuidanceMode::free_form) {
    const std::int64_t cp = state_.checkpoints[static_cast<std::size_t>(state_.section) - 1];
    return (state_.steps >= cp && is_interruption(last_token)) ||
           state_.steps >= cp + config_.grace;
  }
  const int budget = config_.section_token_budget;
  return (state_.section_tokens >= budget && is_interruption(last_token)) ||
         state_.section_tokens >= budget + config_.grace;
}

LogitAdjustment Session::struct_adjust(token_id last_token) const {
  LogitAdjustment adj;
  if (!structural_active()) return adj;

  if (config_.mode == GuidanceMode::free_form) {
    if (!struct_condition(last_token)) return adj;
    const std::int64_t cp = state_.checkpoints[static_cast<std::size_t>(state_.section) - 1];
    for (token_id tok : config_.interruption_tokens)
      insert_entry(adj.entries, {tok, config_.boost});
    adj.events.push_back(state_.steps >= cp + config_.grace ? GuidanceEvent::hard_trigger
                                                            : GuidanceEvent::soft_trigger);
    return adj;
  }

  // A header prefix written before the budget is the model's own doing; only
  // continue it once the budget is spent.
  if (state_.section_tokens < config_.section_token_budget) return adj;

  const auto& title = titles_[static_cast<std::size_t>(state_.section) + 1];
  if (state_.title_cursor) {
    adj.entries.push_back({title.at(*state_.title_cursor), config_.boost});
    adj.events.push_back(GuidanceEvent::title_in_progress);
    return adj;
  }
  if (struct_condition(last_token)) {
    adj.entries.push_back({title.at(0), config_.boost});
    const bool hard = state_.section_tokens >= config_.section_token_budget + config_.grace;
    adj.events.push_back(hard ? GuidanceEvent::hard_trigger : GuidanceEvent::soft_trigger);
  }
  return adj;
}

LogitAdjustment Session::fail_mask() const {
  LogitAdjustment adj;
  if (state_.finished) return adj;
  if (eos_masked()) {
    insert_entry(adj.entries, {config_.eos_token, kMask});
  } else {
    adj.events.push_back(GuidanceEvent::eos_unbanned);
  }

  const auto& recent = state_.recent;
  for (const auto& phrase : config_.banned_phrases) {
    const std::size_t need = phrase.size() - 1;
    if (need > recent.size()) continue;
    if (std::equal(phrase.begin(), phrase.end() - 1, recent.end() - static_cast<std::ptrdiff_t>(need)))
      insert_entry(adj.entries, {phrase.back(), kMask});
  }
  return adj;
}

void Session::start_section(int section) {
  state_.section = section;
  state_.section_tokens = 0;
  state_.waiting = false;
  state_.title_cursor.reset();
  state_.boundaries.push_back({section, state_.steps});
  advanced_on_last_observe_ = true;
}

void Session::observe(token_id token) {
  if (state_.finished) throw SessionClosed();
  advanced_on_last_observe_ = false;

  // Trigger state as seen by the step that produced `token`.
  const bool condition_before = struct_condition(state_.last_token);

  ++state_.steps;
  ++state_.section_tokens;

  if (banned_window_ > 0) {
    state_.recent.push_back(token);
    if (state_.recent.size() > banned_window_) state_.recent.erase(state_.recent.begin());
  }

  if (token == config_.eos_token) {
    state_.premature_eos = eos_masked();
    state_.finished = true;
    state_.last_token = token;
    return;
  }

  if (config_.mode == GuidanceMode::free_form) {
    if (structural_active() && condition_before && is_interruption(token))
      start_section(state_.section + 1);
  } else if (structural_active()) {
    const auto& title = titles_[static_cast<std::size_t>(state_.section) + 1];
    const std::size_t cursor = title.advance(state_.title_cursor.value_or(0), token);
    if (cursor == title.size()) {
      start_section(state_.section + 1);
    } else if (cursor > 0) {
      state_.title_cursor = cursor;
    } else {
      state_.title_cursor.reset();
    }
  }

  if (config_.mode == GuidanceMode::sectioned && !end_marker_.empty() && !state_.end_marker_done) {
    state_.end_marker_cursor = end_marker_.advance(state_.end_marker_cursor, token);
    if (state_.end_marker_cursor == end_marker_.size() && state_.section == total_sections_)
      state_.end_marker_done = true;
  }

  state_.last_token = token;
  state_.waiting = structural_active() && !advanced_on_last_observe_ &&
                   (config_.mode == GuidanceMode::free_form
                        ? state_.steps >= state_.checkpoints[static_cast<std::size_t>(state_.section) - 1]
                        : state_.section_tokens >= config_.section_token_budget);
}

LogitAdjustment Session::step(token_id last_token) {
  if (state_.finished) throw SessionClosed();
  if (last_token == kStartToken) {
    if (started_) throw ArgumentError("start sentinel is only valid at t = 0");
    advanced_on_last_observe_ = false;
  } else {
    observe(last_token);
    if (state_.finished) return {};
  }
  started_ = true;

  LogitAdjustment out = struct_adjust(last_token);
  if (advanced_on_last_observe_)
    out.events.insert(out.events.begin(), GuidanceEvent::section_advanced);
  const LogitAdjustment mask = fail_mask();
  for (const auto& e : mask.entries) insert_entry(out.entries, e);
  out.events.insert(out.events.end(), mask.events.begin(), mask.events.end());
  return out;
}

void apply_adjustment(std::span<double> logits, const LogitAdjustment& adj) {
  for (const auto& e : adj.entries) {
    if (e.token < 0 || static_cast<std::size_t>(e.token) >= logits.size()) continue;
    auto& v = logits[static_cast<std::size_t>(e.token)];
    v = e.masked() ? kMask : v + e.bias;
  }
}

}  // namespace steady
