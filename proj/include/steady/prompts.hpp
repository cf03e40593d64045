#pragma once

// Instruction templates for the benchmark task matrix and the judge prompt.
//
// Templates carry the placeholders {num_section} and {word_section}. English
// templates are canonical; Chinese templates are unofficial translations and
// are marked as such.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steady/sections.hpp"

namespace steady::prompts {

using sections::Language;

enum class Task { story, dialogue, diary, architecture, code_function, user_info, company_info, math_formula };
enum class Complexity { simple, complex, fine_grained };

std::string_view to_string(Task task) noexcept;
std::string_view to_string(Complexity complexity) noexcept;
Task parse_task(std::string_view name);              // throws TemplateMissing
Complexity parse_complexity(std::string_view name);  // throws ArgumentError
const std::vector<Task>& all_tasks();

class TemplateMissing : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PromptTemplate {
  Task task;
  Language language;
  Complexity complexity;  // simple or complex
  std::string_view text;
  bool official;
};

const std::vector<PromptTemplate>& templates();

// fine_grained resolves to the simple template of the same task.
const PromptTemplate& find_template(Task task, Language language, Complexity complexity);

std::string substitute(std::string_view text, int num_sections, int words_per_section);

// Noun used for one section of a task ("Chapter", "Round", ...).
std::string_view section_noun(Task task);

std::string constraint_clause(const sections::ConstraintSpec& spec, Task task);

// Renders the template; constraint clauses are inserted at the end of the
// instruction paragraph, before the "*** started ***" line.
std::string render(Task task, Language language, Complexity complexity, int num_sections,
                   int words_per_section, const std::vector<sections::ConstraintSpec>& constraints = {});

sections::TaskProfile profile_for(Task task, Complexity complexity, Language language);

inline constexpr std::string_view kStartedLine = "*** started ***";

std::string_view judge_template();
std::string render_judge(std::string_view user_request, std::string_view model_response);

}  // namespace steady::prompts
