#include <doctest.h>

#include <cmath>
#include <random>

#include "steady/sections.hpp"
#include "steady/toy_lm.hpp"

using namespace steady;
using namespace steady::toy;

TEST_SUITE("toy_lm") {

TEST_CASE("vocabulary round-trips text") {
  ToyVocab v;
  CHECK(v.eos() == 0);
  CHECK(v.surface(v.number(42)) == "42");
  CHECK(v.number_value(v.number(42)) == 42);
  CHECK_THROWS_AS(v.number(0), ArgumentError);
  CHECK_THROWS_AS(v.id("no-such-word"), ArgumentError);

  const auto title = v.title(HeaderFamily::day, 3);
  const auto text = v.detokenize(title);
  CHECK(text.find("Day 3") != std::string::npos);
  CHECK(v.tokenize(text) == title);

  const auto marker = v.end_marker();
  CHECK(v.detokenize(marker).find(sections::kEndMarker) != std::string::npos);
}

TEST_CASE("sampling honours masks and argmax ties") {
  const std::vector<double> logits = {1.0, 3.0, 3.0, -2.0};
  std::mt19937_64 rng(0);
  CHECK(sample(logits, {}, 0.0, rng) == 1);

  LogitAdjustment adj;
  adj.entries = {{1, kMask}, {3, 15.0}};
  CHECK(sample(logits, adj, 0.0, rng) == 3);
  const auto p = adjusted_probabilities(logits, adj, 1.0);
  CHECK(p[1] == 0.0);
  double sum = 0;
  for (double x : p) sum += x;
  CHECK(sum == doctest::Approx(1.0));

  LogitAdjustment all;
  all.entries = {{0, kMask}, {1, kMask}, {2, kMask}, {3, kMask}};
  CHECK_THROWS_AS(sample(logits, all, 1.0, rng), ImpossibleDistribution);
}

TEST_CASE("generation is deterministic per seed") {
  ToyVocab v;
  ToyConfig c;
  c.failure_mode = FailureMode::eos_ramp;
  c.seed = 3;
  const auto g = toy_guidance(v, c.target_sections, c.section_tokens);
  const auto a = run_generation(v, c, g, 2000);
  const auto b = run_generation(v, c, g, 2000);
  CHECK(a.tokens == b.tokens);
  c.seed = 4;
  CHECK(run_generation(v, c, g, 2000).tokens != a.tokens);
}

TEST_CASE("guided eos_ramp run reaches every section") {
  ToyVocab v;
  ToyConfig c;
  c.failure_mode = FailureMode::eos_ramp;
  c.target_sections = 12;
  c.seed = 1;
  const auto r = run_generation(v, c, toy_guidance(v, 12, c.section_tokens), 5000);
  CHECK(r.stop_reason == StopReason::eos);
  CHECK(r.boundaries.size() == 11);

  const auto doc = sections::parse_sections(v.detokenize(r.tokens), {});
  CHECK(doc.sections.size() == 12);
  CHECK(doc.end_marker_present);
  for (std::size_t i = 0; i < doc.sections.size(); ++i)
    CHECK(doc.sections[i].index_as_labeled == static_cast<int>(i) + 1);
}

TEST_CASE("unguided eos_ramp run stops early") {
  ToyVocab v;
  ToyConfig c;
  c.failure_mode = FailureMode::eos_ramp;
  c.target_sections = 100;
  c.seed = 2;
  const auto r = run_generation(v, c, std::nullopt, 5000);
  CHECK(r.stop_reason == StopReason::eos);
  CHECK(r.boundaries.size() < 49);
}

TEST_CASE("filler mode writes the banned phrase without guidance") {
  ToyVocab v;
  ToyConfig c;
  c.failure_mode = FailureMode::filler;
  c.seed = 0;
  const auto r = run_generation(v, c, std::nullopt, 3000);
  const auto phrase = v.filler_phrase();
  const auto it = std::search(r.tokens.begin(), r.tokens.end(), phrase.begin(), phrase.end());
  CHECK(it != r.tokens.end());
}

TEST_CASE("config validation") {
  ToyConfig c;
  c.target_sections = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.target_sections = ToyVocab::kMaxSectionNumber + 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_failure_mode("loop") == FailureMode::loop);
  CHECK_THROWS(parse_failure_mode("nope"));
}

}  // TEST_SUITE
