#pragma once

/**
 * Decoding guidance controller.
 *
 * A Session watches the token stream of one generation and, before every
 * decode step, returns a sparse LogitAdjustment for the runtime to add to its
 * logits. Two components are composed:
 *
 * - Structural enforcement: once the current section has used its token
 *   budget, wait for a natural interruption token and then boost the next
 *   section header (soft trigger); after a further grace period, boost the
 *   header regardless of context (hard trigger). Multi-token headers are
 *   emitted one boosted token per step by a prefix automaton.
 * - Failure prevention: EOS is masked until the final section has written the
 *   end marker, and any token that would complete a banned phrase is masked.
 *
 * Masks win over boosts on the same token id. Adjustments depend only on the
 * observed token history, never on logit values, so the controller can sit on
 * the far side of a process boundary (see bridge.hpp).
 *
 * Usage:
 *   steady::Session session(config);
 *   token_id last = steady::kStartToken;
 *   while (!session.finished()) {
 *     auto adj = session.step(last);
 *     last = runtime.sample(adj);
 *   }
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "steady/common.hpp"
#include "steady/prefix_matcher.hpp"

namespace steady {

enum class GuidanceMode { sectioned, free_form };

struct CheckpointBounds {
  int low = 300;
  int high = 500;
};

using TitleTemplate = std::function<std::vector<token_id>(int section)>;

struct GuidanceConfig {
  int total_sections = 1;          // P_total
  int section_token_budget = 1;    // tau_max
  int grace = 100;                 // delta
  double boost = 15.0;             // beta, log-odds units
  std::vector<token_id> interruption_tokens;
  std::vector<std::vector<token_id>> banned_phrases;
  TitleTemplate title_template;    // header tokens for section p (p >= 2)
  token_id eos_token = 0;
  std::vector<token_id> end_marker;
  GuidanceMode mode = GuidanceMode::sectioned;
  int freeform_target_tokens = 0;
  CheckpointBounds checkpoint_bounds;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

enum class GuidanceEvent {
  soft_trigger,
  hard_trigger,
  section_advanced,
  eos_unbanned,
  title_in_progress,
};

std::string_view to_string(GuidanceEvent event) noexcept;

struct BiasEntry {
  token_id token = 0;
  double bias = 0.0;

  bool masked() const noexcept { return bias == kMask; }
  friend bool operator==(const BiasEntry&, const BiasEntry&) = default;
};

struct LogitAdjustment {
  std::vector<BiasEntry> entries;  // sorted by token id, ids unique
  std::vector<GuidanceEvent> events;

  bool empty() const noexcept { return entries.empty(); }
  const BiasEntry* find(token_id token) const noexcept;
  bool has_event(GuidanceEvent event) const noexcept;
  friend bool operator==(const LogitAdjustment&, const LogitAdjustment&) = default;
};

struct SectionBoundary {
  int section = 0;          // index of the section that just started
  std::int64_t step = 0;    // generation step of the token completing the header
  friend bool operator==(const SectionBoundary&, const SectionBoundary&) = default;
};

struct GenerationState {
  int section = 1;                       // p, 1-based
  int section_tokens = 0;                // tau_p
  std::int64_t steps = 0;                // t
  bool waiting = false;                  // budget used, no trigger yet
  std::optional<std::size_t> title_cursor;
  std::vector<token_id> recent;          // tail used for banned-phrase matching
  std::size_t end_marker_cursor = 0;
  bool end_marker_done = false;
  bool finished = false;
  bool premature_eos = false;            // EOS observed while it was masked
  token_id last_token = kStartToken;
  std::vector<SectionBoundary> boundaries;
  std::vector<std::int64_t> checkpoints;  // free-form milestones, cumulative
};

// Splits a free-form target into k equal-width intervals whose width falls in
// `bounds`; returns cumulative end positions (last == target_tokens).
std::vector<std::int64_t> freeform_checkpoints(std::int64_t target_tokens,
                                               CheckpointBounds bounds);

class Session {
 public:
  explicit Session(GuidanceConfig config);

  // Observes `last_token` (unless it is kStartToken) and returns the
  // adjustment for the next decode step. If the observed token finishes the
  // session, returns an empty adjustment; further calls throw SessionClosed.
  LogitAdjustment step(token_id last_token);

  // Advances counters and automata by one emitted token.
  void observe(token_id token);

  // Trigger condition for the structural boost, evaluated on the current
  // state with `last_token` as y_{t-1}.
  bool struct_condition(token_id last_token) const;
  LogitAdjustment struct_adjust(token_id last_token) const;
  LogitAdjustment fail_mask() const;

  const GenerationState& state() const noexcept { return state_; }
  const GuidanceConfig& config() const noexcept { return config_; }
  bool finished() const noexcept { return state_.finished; }
  int total_sections() const noexcept { return total_sections_; }
  std::span<const token_id> pending_title() const noexcept;

 private:
  bool is_interruption(token_id token) const noexcept;
  bool eos_masked() const noexcept;
  bool structural_active() const noexcept;
  void start_section(int section);

  GuidanceConfig config_;
  GenerationState state_;
  int total_sections_ = 1;
  std::vector<PrefixMatcher<token_id>> titles_;  // titles_[p] heads section p
  PrefixMatcher<token_id> end_marker_;
  std::size_t banned_window_ = 0;
  bool advanced_on_last_observe_ = false;
  bool started_ = false;
};

// Applies an adjustment to a dense logit vector in place.
void apply_adjustment(std::span<double> logits, const LogitAdjustment& adj);

}  // namespace steady
