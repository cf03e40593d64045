#pragma once

// Benchmark orchestration: instruction matrix expansion, N-sample execution
// through an engine, append-only JSONL run store, per-spec summaries and
// reports.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steady/judge.hpp"
#include "steady/prompts.hpp"
#include "steady/sections.hpp"
#include "steady/toy_lm.hpp"

namespace steady::sections {
void to_json(nlohmann::json& j, const ConstraintSpec& c);
void from_json(const nlohmann::json& j, ConstraintSpec& c);
}  // namespace steady::sections

namespace steady::bench {

using prompts::Complexity;
using prompts::Task;
using sections::ConstraintKind;
using sections::ConstraintSpec;
using sections::Language;

inline constexpr std::array<int, 7> kScales = {5, 10, 20, 50, 100, 200, 500};

struct PromptSpec {
  Task task = Task::story;
  Language language = Language::en;
  Complexity complexity = Complexity::simple;
  int num_sections = 5;
  int words_per_section = 200;
  std::vector<ConstraintSpec> constraints;

  std::string id() const;
  std::int64_t target_words() const noexcept {
    return static_cast<std::int64_t>(num_sections) * words_per_section;
  }
};

void to_json(nlohmann::json& j, const PromptSpec& s);
void from_json(const nlohmann::json& j, PromptSpec& s);

struct MatrixConfig {
  std::vector<Task> tasks;
  std::vector<Language> languages = {Language::en};
  std::vector<Complexity> complexities = {Complexity::simple};
  std::vector<int> scales = {5, 10, 20};
  int words_per_section = 200;
  std::vector<ConstraintKind> constraint_kinds = {ConstraintKind::first_char, ConstraintKind::keyword,
                                                  ConstraintKind::theme};
  std::uint64_t seed = 0;
};

// Number of constrained sections for a fine-grained spec at a given scale.
int constrained_section_count(int num_sections);

std::vector<PromptSpec> expand_matrix(const MatrixConfig& config);

std::string render_prompt(const PromptSpec& spec);

struct SectionSummary {
  int index_as_labeled = 0;
  int position = 0;
  std::string title;
  std::int64_t word_count = 0;
};

struct RunRecord {
  std::string spec_id;
  PromptSpec spec;
  int run_index = 1;
  std::uint64_t seed = 0;
  std::string engine;
  std::string text;
  std::int64_t token_count = 0;
  std::int64_t word_count = 0;
  std::vector<SectionSummary> sections;
  bool end_marker = false;
  std::vector<std::string> failure_tags;
  std::string stop_reason;
  double duration_s = 0.0;
  std::int64_t structured_correct = 0;   // sections passing the task validator
  std::int64_t constraints_satisfied = 0;
  std::int64_t constraints_total = 0;
  bool failed = false;
  std::string error;
};

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

struct JudgementRecord {
  std::string spec_id;
  int run_index = 1;
  std::array<int, 6> scores{};
  double uca = 0.0;
  bool failed = false;
  std::string error;
};

void to_json(nlohmann::json& j, const JudgementRecord& r);
void from_json(const nlohmann::json& j, JudgementRecord& r);

// Append-only JSONL store. Each line is {"kind": "run"|"judgement", ...}.
// Appends are serialized and flushed per record.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path path);

  void append(const RunRecord& record);
  void append(const JudgementRecord& record);
  const std::filesystem::path& path() const noexcept { return path_; }

  struct Contents {
    std::vector<RunRecord> runs;
    std::vector<JudgementRecord> judgements;
    std::size_t skipped_lines = 0;  // malformed or truncated lines
  };
  static Contents load(const std::filesystem::path& path);

 private:
  void append_line(const std::string& line);

  std::filesystem::path path_;
  std::mutex mutex_;
};

struct EngineOutput {
  std::string text;
  std::int64_t token_count = 0;
  std::string stop_reason;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::string name() const = 0;
  // Must be safe to call concurrently; each call owns its own session.
  virtual EngineOutput generate(const PromptSpec& spec, const std::string& prompt,
                                std::uint64_t seed) const = 0;
};

struct ToyEngineConfig {
  toy::ToyConfig model;            // target_sections/section_tokens/seed are set per run
  bool guided = true;
  int grace = 100;
  double words_to_tokens = 1.0;
  double max_steps_factor = 4.0;   // step cap relative to the target token count
};

// Runs the toy model on story/dialogue/diary/architecture specs.
class ToyEngine : public Engine {
 public:
  explicit ToyEngine(ToyEngineConfig config);
  std::string name() const override;
  EngineOutput generate(const PromptSpec& spec, const std::string& prompt,
                        std::uint64_t seed) const override;

 private:
  ToyEngineConfig config_;
  toy::ToyVocab vocab_;
};

struct ExternalEngineConfig {
  std::string endpoint;
  double words_to_tokens = 1.3;
  double max_tokens_factor = 2.0;
  int grace = 100;
  int timeout_seconds = 600;
};

// POSTs {prompt, seed, max_tokens, guidance:{...}} and expects
// {text, token_count[, stop_reason]} back.
class ExternalEngine : public Engine {
 public:
  explicit ExternalEngine(ExternalEngineConfig config);
  std::string name() const override { return "external"; }
  EngineOutput generate(const PromptSpec& spec, const std::string& prompt,
                        std::uint64_t seed) const override;

 private:
  ExternalEngineConfig config_;
};

// Parses and scores a finished generation.
RunRecord analyze_run(const PromptSpec& spec, int run_index, std::uint64_t seed,
                      const std::string& engine, const EngineOutput& output, double duration_s);

// N runs with seeds base_seed .. base_seed + N - 1; each record is appended to
// `store` (if given) as soon as it completes. Engine errors mark the run
// failed and the batch continues.
std::vector<RunRecord> execute(const PromptSpec& spec, const Engine& engine, int n,
                               std::uint64_t base_seed, RunStore* store = nullptr, int jobs = 1);

struct MetricSummary {
  std::string spec_id;
  PromptSpec spec;
  int runs = 0;
  int failed_runs = 0;
  double target_words = 0;
  double mean_length = 0;
  double lsd = 0;
  double lvc = 0;
  double mla = 0;
  double fsd = 0;
  double mean_sections = 0;
  std::optional<double> sca;                  // structured tasks
  std::optional<double> constraint_accuracy;  // fine-grained specs
  std::optional<double> uca;                  // when judgements exist
  double ngram_repetition = 0;                // mean 3-gram repetition, fraction
  double ttr = 0;                             // mean, fraction
};

void to_json(nlohmann::json& j, const MetricSummary& s);

// Summaries for every spec with at least one completed run, in first-seen order.
std::vector<MetricSummary> summarize(const std::vector<RunRecord>& runs,
                                     const std::vector<JudgementRecord>& judgements = {});

// One summary from the records of a single spec. Throws ArgumentError if no
// completed run is present.
MetricSummary summarize_spec(const std::vector<RunRecord>& runs,
                             const std::vector<JudgementRecord>& judgements = {});

enum class ReportFormat { csv, lines };
ReportFormat parse_report_format(std::string_view name);

std::string emit_report(const std::vector<MetricSummary>& summaries, ReportFormat format);

// "spec,target,mean,sd" rows for target-vs-length plots.
std::string plot_data(const std::vector<MetricSummary>& summaries);

// Consistency checks over stored records; returns human-readable violations.
std::vector<std::string> check_invariants(const std::vector<RunRecord>& runs,
                                          const std::vector<MetricSummary>& summaries);

}  // namespace steady::bench
