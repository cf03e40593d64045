#include <doctest.h>

#include "steady/prompts.hpp"
#include "tables.hpp"

using namespace steady;
using namespace steady::prompts;

TEST_SUITE("prompts") {

TEST_CASE("rendered EN templates match the fixtures byte for byte") {
  for (Task task : all_tasks())
    for (Complexity cx : {Complexity::simple, Complexity::complex}) {
      const std::string name = "prompts/en_" + std::string(to_string(cx)) + "_" + std::string(to_string(task)) + ".txt";
      CAPTURE(name);
      CHECK(render(task, sections::Language::en, cx, 5, 200) == fixtures::read_file(name));
    }
}

TEST_CASE("template catalogue") {
  int en = 0, ch = 0;
  for (const auto& t : templates()) {
    if (t.language == sections::Language::en) {
      ++en;
      CHECK(t.official);
    } else {
      ++ch;
      CHECK_FALSE(t.official);
    }
  }
  CHECK(en == 16);
  CHECK(ch == 16);
  CHECK(&find_template(Task::diary, sections::Language::en, Complexity::fine_grained) ==
        &find_template(Task::diary, sections::Language::en, Complexity::simple));
  CHECK_THROWS_AS(parse_task("poem"), TemplateMissing);
  CHECK(parse_task("math_formula") == Task::math_formula);
  CHECK(parse_complexity("fine_grained") == Complexity::fine_grained);
}

TEST_CASE("fine-grained clauses precede the started line") {
  const std::vector<sections::ConstraintSpec> cs = {
      {sections::ConstraintKind::keyword, 2, "lantern", {}, 2},
      {sections::ConstraintKind::first_char, 4, "M", {}, 2}};
  const auto text = render(Task::story, sections::Language::en, Complexity::fine_grained, 5, 100, cs);
  const auto started = text.find(kStartedLine);
  const auto kw = text.find("Chapter 2 must include the keyword 'lantern'.");
  const auto fc = text.find("The first word of Chapter 4 must begin with the letter 'M'.");
  REQUIRE(kw != std::string::npos);
  REQUIRE(fc != std::string::npos);
  CHECK(kw < fc);
  CHECK(fc < started);
  // Without constraints the fine-grained prompt equals the simple one.
  CHECK(render(Task::story, sections::Language::en, Complexity::fine_grained, 5, 100) ==
        render(Task::story, sections::Language::en, Complexity::simple, 5, 100));
}

TEST_CASE("placeholders are substituted everywhere") {
  for (const auto& t : templates()) {
    const auto text = render(t.task, t.language, t.complexity, 37, 123);
    CHECK(text.find("{num_section}") == std::string::npos);
    CHECK(text.find("{word_section}") == std::string::npos);
    CHECK(text.find("37") != std::string::npos);
  }
  CHECK_THROWS_AS(render(Task::story, sections::Language::en, Complexity::simple, 0, 10), ArgumentError);
}

TEST_CASE("judge prompt") {
  CHECK(judge_template() == fixtures::read_file("judge_prompt.txt"));
  const auto p = render_judge("write {model_response}", "RESPONSE");
  CHECK(p.find("write {model_response}") != std::string::npos);
  CHECK(p.find("RESPONSE") != std::string::npos);
  CHECK(p.find("{user_request}") == std::string::npos);
}

}  // TEST_SUITE
