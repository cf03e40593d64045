#include <doctest.h>

#include "steady/sections.hpp"

using namespace steady;
using namespace steady::sections;

namespace {

std::string story(std::initializer_list<int> labels, bool marker, const std::string& body = "some words here.") {
  std::string out = "Intro line.\n";
  for (int n : labels) out += "#*# Chapter " + std::to_string(n) + ": Title " + std::to_string(n) + "\n" + body + "\n\n";
  if (marker) out += std::string(kEndMarker) + "\n";
  return out;
}

}  // namespace

TEST_SUITE("sections") {

TEST_CASE("chapter headers split the document") {
  const auto text = story({1, 2, 3}, true);
  const auto doc = parse_sections(text, {});
  REQUIRE(doc.sections.size() == 3);
  CHECK(doc.labels() == std::vector<int>{1, 2, 3});
  CHECK(doc.sections[1].title_text == "Title 2");
  CHECK(doc.sections[1].position == 2);
  CHECK(doc.sections[0].word_count == 3);
  CHECK(doc.preamble == "Intro line.\n");
  CHECK(doc.end_marker_present);
  CHECK(doc.reserialize() == text);
}

TEST_CASE("header families") {
  const std::string diary = "#*# Date: Day 1\nfoo bar\n#*# Date Day 2\nbaz\n";
  CHECK(parse_sections(diary, {HeaderFamily::day}).labels() == std::vector<int>{1, 2});

  const std::string rounds = "#*# Round 1:\nCustomer: hi\n#*# Round 2:\nAgent: hello\n";
  CHECK(parse_sections(rounds, {HeaderFamily::round}).labels() == std::vector<int>{1, 2});

  const std::string code = "# Function 1: add\ndef add(a, b):\n    \"\"\"Adds.\"\"\"\n    return a + b\n"
                           "x = '# Function 9'\n# Function 2: sub\ndef sub(a, b):\n    pass\n";
  const auto doc = parse_sections(code, {HeaderFamily::function_comment, Validator::code_function});
  CHECK(doc.labels() == std::vector<int>{1, 2});
  CHECK(verify_structured(doc.sections[0], Validator::code_function));
  CHECK_FALSE(verify_structured(doc.sections[1], Validator::code_function));

  const std::string users = "[\n{\"index\": 1, \"name\": \"A\", \"age\": 3, \"gender\": \"f\", \"address\": \"x\", "
                            "\"email\": \"e\", \"phone\": \"p\"},\n{\"index\": 2, \"name\": \"B\"}\n]\n";
  const auto udoc = parse_sections(users, {HeaderFamily::record_index, Validator::user_record});
  REQUIRE(udoc.labels() == std::vector<int>{1, 2});
  CHECK(verify_structured(udoc.sections[0], Validator::user_record));
  CHECK_FALSE(verify_structured(udoc.sections[1], Validator::user_record));

  const std::string tex = "% Formula 1: area\n\\begin{equation}\nA = \\pi r^2\n\\end{equation}\n"
                          "% Formula 2: empty\n\\begin{equation}\n\\end{equation}\n";
  const auto tdoc = parse_sections(tex, {HeaderFamily::formula_comment, Validator::latex_equation});
  REQUIRE(tdoc.sections.size() == 2);
  CHECK(verify_structured(tdoc.sections[0], Validator::latex_equation));
  CHECK_FALSE(verify_structured(tdoc.sections[1], Validator::latex_equation));
}

TEST_CASE("glyph must start a word") {
  const auto doc = parse_sections("x#*# Chapter 1:\nfoo\n", {});
  CHECK(doc.sections.empty());
}

TEST_CASE("marker before the last header is not the end marker") {
  const std::string text = "#*# Chapter 1:\na\n*** finished ***\n#*# Chapter 2:\nb\n";
  const auto doc = parse_sections(text, {});
  CHECK(doc.sections.size() == 2);
  CHECK_FALSE(doc.end_marker_present);
}

TEST_CASE("word counting") {
  CHECK(word_count("  one two\tthree\n") == 3);
  CHECK(word_count("") == 0);
  // Two ideographs, a separator, a latin run.
  CHECK(word_count("\xE4\xBD\xA0\xE5\xA5\xBD\xE3\x80\x82" "abc", Language::ch) == 3);
}

TEST_CASE("failure classification") {
  CHECK(classify_failure(parse_sections(story({1, 2, 3}, true), {}), 3) == std::vector<FailureTag>{FailureTag::clean});
  CHECK(classify_failure(parse_sections(story({1, 2}, false), {}), 3) ==
        std::vector<FailureTag>{FailureTag::incomplete});
  CHECK(classify_failure(parse_sections(story({1, 2, 3}, false), {}), 3) ==
        std::vector<FailureTag>{FailureTag::incomplete});
  CHECK(classify_failure(parse_sections(story({1, 2, 10}, true), {}), 10) ==
        std::vector<FailureTag>{FailureTag::skipping});

  std::string loop = "the cat sat ";
  for (int i = 0; i < 40; ++i) loop += "on the mat ";
  const auto tags = classify_failure(parse_sections(story({1, 2}, false, loop), {}), 2);
  CHECK(std::find(tags.begin(), tags.end(), FailureTag::repetition_loop) != tags.end());
  CHECK(std::find(tags.begin(), tags.end(), FailureTag::clean) == tags.end());
}

TEST_CASE("constraints") {
  const std::string text = "#*# Chapter 1:\n**Lanterns** glow over the harvest orchard.\n#*# Chapter 2:\nRiverbank.\n";
  const auto doc = parse_sections(text, {});

  ConstraintSpec fc{ConstraintKind::first_char, 1, "l", {}, 2};
  CHECK(verify_constraint(doc.sections, fc).satisfied);
  fc.value = "R";
  CHECK_FALSE(verify_constraint(doc.sections, fc).satisfied);

  ConstraintSpec kw{ConstraintKind::keyword, 2, "river", {}, 2};
  CHECK_FALSE(verify_constraint(doc.sections, kw).satisfied);  // whole word only
  kw.value = "Riverbank";
  CHECK(verify_constraint(doc.sections, kw).satisfied);

  ConstraintSpec th{ConstraintKind::theme, 1, "harvest", {"harvest", "orchard", "cider"}, 2};
  CHECK(verify_constraint(doc.sections, th).satisfied);
  th.theme_threshold = 3;
  CHECK_FALSE(verify_constraint(doc.sections, th).satisfied);

  ConstraintSpec missing{ConstraintKind::keyword, 7, "x", {}, 2};
  const auto r = verify_constraint(doc.sections, missing);
  CHECK_FALSE(r.satisfied);
  CHECK(r.missing_section);

  ConstraintSpec bad{ConstraintKind::first_char, 1, "ab", {}, 2};
  CHECK_THROWS_AS(verify_constraint(doc.sections, bad), ConfigError);
}

TEST_CASE("name parsing") {
  CHECK(parse_language("CH") == Language::ch);
  CHECK(parse_language("en") == Language::en);
  CHECK_THROWS_AS(parse_language("fr"), ArgumentError);
  CHECK(parse_constraint_kind("theme") == ConstraintKind::theme);
  CHECK(parse_header_family("record_index") == HeaderFamily::record_index);
}

}  // TEST_SUITE
