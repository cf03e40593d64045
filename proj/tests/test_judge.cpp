#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "steady/http.hpp"
#include "steady/judge.hpp"

using namespace steady;
using namespace steady::judge;
using nlohmann::json;

namespace {

const std::string kReply =
    "Here is my evaluation:\n```json\n{\"Analysis\": \"ok {not json}\", \"Relevance\": 5, \"Accuracy\": 4, "
    "\"Coherence\": 4, \"Clarity\": 3, \"Breadth and Depth\": 5, \"Reading Experience\": 3}\n```";

std::string wrap(const std::string& content) {
  return json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

}  // namespace

TEST_SUITE("judge") {

TEST_CASE("scores are parsed from prose-wrapped JSON") {
  const auto s = parse_scores(kReply);
  CHECK(s.scores == std::array<int, 6>{5, 4, 4, 3, 5, 3});
  CHECK(s.uca == doctest::Approx(24.0 / 6.0 / 5.0 * 100.0));
  CHECK(s.analysis == "ok {not json}");
}

TEST_CASE("invalid scores are rejected") {
  CHECK_THROWS_AS(parse_scores("no object here"), JudgeFailure);
  CHECK_THROWS_AS(parse_scores("{\"Relevance\": 5}"), JudgeFailure);
  auto bad = kReply;
  bad.replace(bad.find("\"Clarity\": 3"), 12, "\"Clarity\": 6");
  CHECK_THROWS_AS(parse_scores(bad), JudgeFailure);
  bad = kReply;
  bad.replace(bad.find("\"Clarity\": 3"), 12, "\"Clarity\": \"3\"");
  CHECK_THROWS_AS(parse_scores(bad), JudgeFailure);
}

TEST_CASE("request shape and reply extraction") {
  JudgeConfig cfg;
  cfg.model = "judge-model";
  const auto body = json::parse(build_request(cfg, "PROMPT"));
  CHECK(body["model"] == "judge-model");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "PROMPT");
  CHECK(extract_reply(cfg, wrap("hi")) == "hi");
  CHECK_THROWS_AS(extract_reply(cfg, "{}"), JudgeFailure);
  CHECK_THROWS_AS(extract_reply(cfg, "<html>"), JudgeFailure);
}

TEST_CASE("retries until a valid reply arrives") {
  JudgeConfig cfg;
  cfg.max_retries = 2;
  int calls = 0;
  Transport t = [&](const std::string& body) {
    ++calls;
    const auto prompt = json::parse(body)["messages"][0]["content"].get<std::string>();
    CHECK(prompt.find("USER ASK") != std::string::npos);
    CHECK(prompt.find("MODEL SAYS") != std::string::npos);
    if (calls < 3) return wrap("I refuse to use JSON.");
    return wrap(kReply);
  };
  const auto s = judge_score("USER ASK", "MODEL SAYS", cfg, t);
  CHECK(calls == 3);
  CHECK(s.scores[0] == 5);

  calls = 0;
  cfg.max_retries = 1;
  CHECK_THROWS_AS(judge_score("USER ASK", "MODEL SAYS", cfg, t), JudgeFailure);
  CHECK(calls == 2);
}

TEST_CASE("http transport sends the credential header") {
  httplib::Server server;
  std::string seen_auth;
  int status = 200;
  server.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.status = status;
    res.set_content(wrap(kReply), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  JudgeConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat";
  cfg.api_key = "test-key";
  cfg.timeout_seconds = 5;
  const auto s = judge_score("q", "a", cfg, http_transport(cfg));
  CHECK(seen_auth == "Bearer test-key");
  CHECK(s.scores[1] == 4);

  status = 500;
  cfg.max_retries = 0;
  CHECK_THROWS_AS(judge_score("q", "a", cfg, http_transport(cfg)), JudgeFailure);

  server.stop();
  th.join();
  CHECK_THROWS_AS(http_post_json("127.0.0.1/no-scheme", "{}"), HttpError);
}

}  // TEST_SUITE
