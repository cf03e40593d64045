#pragma once

// Splits generated documents into numbered sections, counts words, checks
// per-section constraints and structured-output validity, and tags the
// macro failure patterns (incomplete output, skipped sections, loops).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steady/common.hpp"

namespace steady::sections {

inline constexpr std::string_view kEndMarker = "*** finished ***";

enum class HeaderFamily {
  chapter,           // "#*# Chapter 3: title"
  round,             // "#*# Round 3:"
  day,               // "#*# Date: Day 3:"
  floor,             // "#*# Floor 3:"
  function_comment,  // "# Function 3: title" at line start
  record_index,      // JSON object carrying "index": 3
  formula_comment,   // "% Formula 3: title" at line start
};

enum class Validator { none, code_function, user_record, company_record, latex_equation };

enum class Language { en, ch };

std::string_view to_string(HeaderFamily family) noexcept;
std::string_view to_string(Validator validator) noexcept;
std::string_view to_string(Language language) noexcept;
HeaderFamily parse_header_family(std::string_view name);
Language parse_language(std::string_view name);

struct TaskProfile {
  HeaderFamily family = HeaderFamily::chapter;
  Validator validator = Validator::none;
  Language language = Language::en;
};

struct SectionReport {
  int index_as_labeled = 0;
  int position = 0;              // 1-based order in the document
  std::string header_text;       // raw header bytes, through the end of its line
  std::string title_text;        // header remainder after the number, trimmed
  std::string body_text;         // raw bytes up to the next header or end marker
  std::int64_t word_count = 0;   // word_count(body_text)
};

struct ParsedDocument {
  std::string preamble;          // bytes before the first header
  std::vector<SectionReport> sections;
  bool end_marker_present = false;
  std::string trailer;           // bytes after the end marker

  std::vector<int> labels() const;
  // Concatenation of all stored pieces; equals the parsed text.
  std::string reserialize() const;
};

ParsedDocument parse_sections(std::string_view text, const TaskProfile& profile);

// Word units: EN splits on whitespace; CH counts each CJK ideograph as one
// unit and each run of other non-space characters as one unit.
std::vector<std::string> words(std::string_view text, Language language);
std::int64_t word_count(std::string_view text, Language language = Language::en);

enum class ConstraintKind { first_char, keyword, theme };

std::string_view to_string(ConstraintKind kind) noexcept;
ConstraintKind parse_constraint_kind(std::string_view name);

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::keyword;
  int section_index = 1;
  std::string value;                 // first_char letter or keyword
  std::vector<std::string> theme;    // theme keyword list
  int theme_threshold = 2;

  void validate() const;
};

struct ConstraintResult {
  bool satisfied = false;
  bool missing_section = false;
  explicit operator bool() const noexcept { return satisfied; }
};

ConstraintResult verify_constraint(const std::vector<SectionReport>& sections,
                                   const ConstraintSpec& spec);

// Header line counts as the preceding comment for latex_equation.
bool verify_structured(const SectionReport& section, Validator validator);

enum class FailureTag { clean, incomplete, skipping, repetition_loop };

std::string_view to_string(FailureTag tag) noexcept;

struct FailureParams {
  double tail_fraction = 0.2;
  double repetition_threshold = 0.6;
  int ngram = 3;
};

// Tags in enum order; {clean} when nothing fires.
std::vector<FailureTag> classify_failure(const ParsedDocument& doc, int target_sections,
                                         Language language = Language::en,
                                         const FailureParams& params = {});

}  // namespace steady::sections
