#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "steady/guidance.hpp"

using namespace steady;

namespace {

// ids: 0 eos, 1 '.', 2 '\n', 3..6 content, 7 '#', 8.. section numbers, 20 21 marker
GuidanceConfig small_config(int total = 3, int budget = 4, int grace = 5) {
  GuidanceConfig c;
  c.total_sections = total;
  c.section_token_budget = budget;
  c.grace = grace;
  c.interruption_tokens = {1, 2};
  c.eos_token = 0;
  c.end_marker = {20, 21};
  c.title_template = [](int p) { return std::vector<token_id>{7, 8 + p}; };
  return c;
}

}  // namespace

TEST_SUITE("guidance") {

TEST_CASE("config validation names the field") {
  auto c = small_config();
  c.section_token_budget = 0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "section_token_budget");
  }
  c = small_config();
  c.interruption_tokens.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.title_template = nullptr;
  CHECK_THROWS_AS(Session{c}, ConfigError);
  c = small_config();
  c.boost = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("first step masks eos") {
  Session s(small_config());
  const auto adj = s.step(kStartToken);
  REQUIRE(adj.find(0) != nullptr);
  CHECK(adj.find(0)->masked());
  CHECK(adj.entries.size() == 1);
  CHECK_THROWS_AS(s.step(kStartToken), ArgumentError);
}

TEST_CASE("soft trigger waits for an interruption token") {
  Session s(small_config(3, 4, 50));
  s.step(kStartToken);
  for (int i = 0; i < 3; ++i) CHECK(s.step(3).find(7) == nullptr);
  auto adj = s.step(4);  // budget reached, last token is content
  CHECK(adj.find(7) == nullptr);
  CHECK(s.state().waiting);
  adj = s.step(1);
  REQUIRE(adj.find(7) != nullptr);
  CHECK(adj.find(7)->bias == 15.0);
  CHECK(adj.has_event(GuidanceEvent::soft_trigger));
}

TEST_CASE("title automaton emits one boosted token per step") {
  Session s(small_config(3, 2, 50));
  s.step(kStartToken);
  s.step(3);
  s.step(3);
  auto adj = s.step(1);
  REQUIRE(adj.find(7));
  adj = s.step(7);
  REQUIRE(adj.find(10));
  CHECK(adj.has_event(GuidanceEvent::title_in_progress));
  adj = s.step(10);
  CHECK(adj.has_event(GuidanceEvent::section_advanced));
  CHECK(s.state().section == 2);
  CHECK(s.state().section_tokens == 0);
  REQUIRE(s.state().boundaries.size() == 1);
  CHECK(s.state().boundaries[0] == SectionBoundary{2, 5});
  CHECK(adj.find(7) == nullptr);
}

TEST_CASE("hard trigger after the grace period") {
  Session s(small_config(2, 3, 4));
  s.step(kStartToken);
  LogitAdjustment adj;
  for (int i = 0; i < 6; ++i) {
    adj = s.step(3);
    CHECK(adj.find(7) == nullptr);
  }
  adj = s.step(3);  // tau = 7 = budget + grace
  REQUIRE(adj.find(7));
  CHECK(adj.has_event(GuidanceEvent::hard_trigger));
}

TEST_CASE("eos stays masked until the last section writes the end marker") {
  Session s(small_config(2, 1, 0));
  s.step(kStartToken);
  // marker inside section 1 does not count
  s.step(20);
  auto adj = s.step(21);
  CHECK(adj.find(0)->masked());
  s.step(7);
  adj = s.step(10);
  CHECK(s.state().section == 2);
  CHECK(adj.find(0)->masked());
  s.step(20);
  adj = s.step(21);
  CHECK(adj.find(0) == nullptr);
  CHECK(adj.has_event(GuidanceEvent::eos_unbanned));
  CHECK(s.step(0).empty());
  CHECK(s.finished());
  CHECK_FALSE(s.state().premature_eos);
  CHECK_THROWS_AS(s.step(3), SessionClosed);
}

TEST_CASE("premature eos is recorded") {
  Session s(small_config());
  s.step(kStartToken);
  s.step(0);
  CHECK(s.finished());
  CHECK(s.state().premature_eos);
}

TEST_CASE("banned phrase completion is masked and a mask beats a boost") {
  auto c = small_config(2, 1, 0);
  c.banned_phrases = {{3, 4, 5}, {7}};
  Session s(c);
  auto adj = s.step(kStartToken);
  CHECK(adj.find(7)->masked());
  s.step(3);
  adj = s.step(4);
  REQUIRE(adj.find(5));
  CHECK(adj.find(5)->masked());
  adj = s.step(1);  // soft condition holds, but the title head is banned
  CHECK(adj.find(7)->masked());
  CHECK(std::is_sorted(adj.entries.begin(), adj.entries.end(),
                       [](const BiasEntry& a, const BiasEntry& b) { return a.token < b.token; }));
}

TEST_CASE("apply_adjustment adds biases and masks") {
  std::vector<double> logits = {1.0, 2.0, 3.0};
  LogitAdjustment adj;
  adj.entries = {{0, kMask}, {2, 15.0}, {9, 1.0}};
  apply_adjustment(logits, adj);
  CHECK(std::isinf(logits[0]));
  CHECK(logits[1] == 2.0);
  CHECK(logits[2] == 18.0);
}

TEST_CASE("free-form checkpoints") {
  CHECK(freeform_checkpoints(2000, {300, 500}) == std::vector<std::int64_t>{400, 800, 1200, 1600, 2000});
  CHECK(freeform_checkpoints(200, {300, 500}) == std::vector<std::int64_t>{200});
  for (std::int64_t target : {301, 550, 999, 1234, 5000}) {
    const auto cps = freeform_checkpoints(target, {300, 500});
    CHECK(cps.back() == target);
    std::int64_t prev = 0;
    for (auto c : cps) {
      CHECK(c - prev >= 275);
      CHECK(c - prev <= 500);
      prev = c;
    }
  }
  CHECK_THROWS_AS(freeform_checkpoints(0, {300, 500}), ArgumentError);
}

TEST_CASE("free-form mode boosts interruption tokens at a checkpoint") {
  GuidanceConfig c;
  c.mode = GuidanceMode::free_form;
  c.freeform_target_tokens = 10;
  c.checkpoint_bounds = {5, 5};
  c.grace = 3;
  c.interruption_tokens = {1, 2};
  Session s(c);
  CHECK(s.total_sections() == 2);
  s.step(kStartToken);
  for (int i = 0; i < 4; ++i) CHECK(s.step(3).find(1) == nullptr);
  auto adj = s.step(1);  // t = 5, last is an interruption
  CHECK(adj.find(1));
  CHECK(adj.find(2));
  adj = s.step(2);
  CHECK(adj.has_event(GuidanceEvent::section_advanced));
  CHECK(s.state().section == 2);
  CHECK(adj.find(0)->masked());
  for (int i = 0; i < 4; ++i) adj = s.step(3);
  CHECK(adj.find(0) == nullptr);
}

TEST_CASE("adjustments match the history oracle on random streams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::ControllerSpec spec;
    spec.total = 1 + static_cast<int>(rng() % 4);
    spec.budget = 1 + static_cast<int>(rng() % 6);
    spec.grace = static_cast<int>(rng() % 8);
    spec.intr = {1, 2};
    spec.marker = {9, 10};
    spec.banned = {{3, 4}};
    spec.titles.resize(static_cast<std::size_t>(spec.total) + 1);
    for (int p = 2; p <= spec.total; ++p) spec.titles[static_cast<std::size_t>(p)] = {5, 5, static_cast<token_id>(5 + p)};
    Session s(oracle::to_config(spec));
    std::vector<token_id> h;
    auto adj = s.step(kStartToken);
    for (int t = 0; t < 60 && !s.finished(); ++t) {
      REQUIRE(oracle::as_map(adj) == oracle::expected(spec, h));
      token_id next = 1 + static_cast<token_id>(rng() % 10);
      for (const auto& e : adj.entries)
        if (!e.masked() && rng() % 2) next = e.token;
      if (const auto* e = adj.find(next); e && e->masked()) next = 6;
      h.push_back(next);
      adj = s.step(next);
    }
  }
}

}  // TEST_SUITE
