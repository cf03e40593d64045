#pragma once

// Deterministic toy language model with switchable failure modes.
//
// The model emits a small symbolic language ("#*# Chapter 3:" headers, content
// words, sentence punctuation, the "*** finished ***" end marker) from a seeded
// order-1 transition table. Failure modes are logit perturbations, so a
// guidance Session can be exercised against a live sampler.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "steady/common.hpp"
#include "steady/guidance.hpp"

namespace steady::toy {

enum class HeaderFamily { chapter, round, day, floor };

std::string_view to_string(HeaderFamily family) noexcept;

class ToyVocab {
 public:
  static constexpr int kMaxSectionNumber = 500;

  ToyVocab();

  std::size_t size() const noexcept { return surfaces_.size(); }
  const std::string& surface(token_id id) const { return surfaces_.at(static_cast<std::size_t>(id)); }
  std::optional<token_id> lookup(std::string_view surface) const;
  token_id id(std::string_view surface) const;  // throws ArgumentError if unknown

  token_id eos() const noexcept { return eos_; }
  token_id period() const noexcept { return period_; }
  token_id newline() const noexcept { return newline_; }
  token_id paragraph() const noexcept { return paragraph_; }
  token_id colon() const noexcept { return colon_; }
  token_id header_glyph() const noexcept { return glyph_; }
  token_id marker_stars() const noexcept { return stars_; }
  token_id number(int n) const;

  bool is_content(token_id id) const noexcept { return id >= content_begin_ && id < content_end_; }
  bool is_number(token_id id) const noexcept { return id >= number_begin_ && id < number_begin_ + kMaxSectionNumber; }
  int number_value(token_id id) const noexcept { return id - number_begin_ + 1; }
  token_id content_begin() const noexcept { return content_begin_; }
  token_id content_end() const noexcept { return content_end_; }

  std::vector<token_id> title(HeaderFamily family, int section) const;
  std::vector<token_id> end_marker() const;
  std::vector<token_id> filler_phrase() const;  // "I hope these"
  std::vector<token_id> interruptions() const;  // '.', '\n', '\n\n'

  std::string detokenize(std::span<const token_id> tokens) const;
  std::vector<token_id> tokenize(std::string_view text) const;

 private:
  token_id add(std::string surface);
  bool word_like(token_id id) const noexcept;

  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, token_id> index_;
  token_id eos_{}, period_{}, newline_{}, paragraph_{}, colon_{}, glyph_{}, stars_{};
  token_id content_begin_{}, content_end_{}, number_begin_{};
};

enum class FailureMode { none, eos_ramp, loop, skip, filler };

std::string_view to_string(FailureMode mode) noexcept;
FailureMode parse_failure_mode(std::string_view name);

struct ToyConfig {
  FailureMode failure_mode = FailureMode::none;
  double ramp_slope = 0.02;            // lambda, per step
  std::int64_t ramp_start = 0;
  int loop_window = 3;                 // k
  int loop_onset = 40;                 // tokens into a section before collapse
  int skip_after_section = 10;         // m
  double base_temperature = 1.0;
  double format_temperature = 0.5;     // inside headers and the end marker
  std::uint64_t seed = 0;              // sampling
  std::uint64_t model_seed = 7;        // transition table
  int target_sections = 10;            // what the "prompt" asked for
  int section_tokens = 20;
  HeaderFamily header_family = HeaderFamily::chapter;
  double loop_bonus = 6.0;
  double skip_bonus = 8.0;
  double filler_bonus = 6.0;
  double eos_base_logit = -10.0;

  void validate() const;
};

struct ToyState {
  std::int64_t steps = 0;
  int section = 1;             // last header number written (1 after the primer)
  int section_len = 0;         // tokens since the last header completed
  int sentence_len = 0;
  int header_pos = 0;          // > 0 while writing a header
  int marker_pos = 0;          // > 0 while writing the end marker
  bool marker_done = false;
  bool collapsed = false;      // loop mode: lost focus in this section
  token_id last = kStartToken;
  token_id last_content = kStartToken;
  std::vector<token_id> history;
};

class ToyModel {
 public:
  static constexpr double kFloor = -10.0;

  ToyModel(const ToyVocab& vocab, ToyConfig config);

  std::vector<double> logits() const;
  double temperature() const noexcept;
  bool in_format_mode() const noexcept;
  void observe(token_id token);

  // Header for section 1, emitted as prompt continuation before sampling.
  std::vector<token_id> primer() const;

  const ToyState& state() const noexcept { return state_; }
  const ToyConfig& config() const noexcept { return config_; }

 private:
  std::vector<token_id> header_after_glyph() const;

  const ToyVocab& vocab_;
  ToyConfig config_;
  ToyState state_;
  std::vector<std::vector<double>> table_;  // [prev content or BOS][content]
};

class ImpossibleDistribution : public std::runtime_error {
 public:
  ImpossibleDistribution() : std::runtime_error("every token is masked") {}
};

// Adds the adjustment, then samples from softmax(logits / temperature). A
// non-positive temperature selects argmax with lowest-id tie-break.
token_id sample(std::span<const double> logits, const LogitAdjustment& adjustment,
                double temperature, std::mt19937_64& rng);

// Probabilities after adjustment and temperature; exposed for tests.
std::vector<double> adjusted_probabilities(std::span<const double> logits,
                                           const LogitAdjustment& adjustment,
                                           double temperature);

enum class StopReason { eos, max_steps };

std::string_view to_string(StopReason reason) noexcept;

struct StepEvent {
  std::int64_t step = 0;
  token_id token = 0;
  std::vector<GuidanceEvent> events;
};

struct GenerationResult {
  std::vector<token_id> tokens;     // primer + generated (EOS excluded)
  std::size_t primer_length = 0;
  std::int64_t generated_tokens = 0;
  std::vector<SectionBoundary> boundaries;
  StopReason stop_reason = StopReason::max_steps;
  std::vector<StepEvent> events;    // only steps that carried guidance events
};

// Guidance config matching the toy vocabulary: titles for `family`, the
// "*** finished ***" marker, the filler phrase banned, EOS as stop token.
GuidanceConfig toy_guidance(const ToyVocab& vocab, int total_sections, int section_token_budget,
                            HeaderFamily family = HeaderFamily::chapter, int grace = 100);

GenerationResult run_generation(const ToyVocab& vocab, const ToyConfig& config,
                                const std::optional<GuidanceConfig>& guidance,
                                std::int64_t max_steps);

}  // namespace steady::toy
