#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <future>
#include <sstream>
#include <thread>

#include "steady/bridge.hpp"
#include "steady/toy_lm.hpp"

using namespace steady;
using namespace steady::bridge;
using nlohmann::json;

namespace {

json small_config_json() {
  return json{{"total_sections", 2},
              {"section_token_budget", 2},
              {"grace", 3},
              {"interruption_tokens", {1, 2}},
              {"eos_token", 0},
              {"end_marker", {20, 21}},
              {"banned_phrases", {{3, 4}}},
              {"titles", {json::array(), {7, 9}}}};
}

std::string init_line(const json& cfg) { return json{{"type", "init"}, {"config", cfg}}.dump(); }
std::string step_line(long long tok) { return json{{"type", "step"}, {"last_token", tok}}.dump(); }

json reply(Connection& c, const std::string& line) { return json::parse(c.handle(line)); }

struct Recorded {
  GuidanceConfig config;
  std::vector<token_id> stream;  // tokens the controller observes, EOS included
};

std::vector<Recorded> record_toy_sessions() {
  static const toy::ToyVocab vocab;
  std::vector<Recorded> out;
  const toy::FailureMode modes[] = {toy::FailureMode::eos_ramp, toy::FailureMode::loop, toy::FailureMode::skip,
                                    toy::FailureMode::filler, toy::FailureMode::none};
  for (int i = 0; i < 5; ++i) {
    toy::ToyConfig c;
    c.failure_mode = modes[i];
    c.seed = static_cast<std::uint64_t>(i);
    c.target_sections = 6;
    c.skip_after_section = 2;
    const auto g = toy::toy_guidance(vocab, c.target_sections, c.section_tokens);
    const auto r = toy::run_generation(vocab, c, g, 3000);
    Recorded rec{g, {r.tokens.begin() + static_cast<std::ptrdiff_t>(r.primer_length), r.tokens.end()}};
    if (r.stop_reason == toy::StopReason::eos) rec.stream.push_back(vocab.eos());
    out.push_back(std::move(rec));
  }
  return out;
}

int connect_local(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  return fd;
}

std::string roundtrip(int fd, const std::string& line) {
  const std::string msg = line + "\n";
  REQUIRE(::send(fd, msg.data(), msg.size(), 0) == static_cast<ssize_t>(msg.size()));
  std::string out;
  char c;
  while (::recv(fd, &c, 1, 0) == 1 && c != '\n') out += c;
  return out;
}

}  // namespace

TEST_SUITE("bridge") {

TEST_CASE("handshake and first step") {
  Connection c;
  const auto ready = reply(c, init_line(small_config_json()));
  CHECK(ready["type"] == "ready");
  CHECK(ready["session_id"].get<std::string>().size() > 1);
  const auto adj = reply(c, step_line(-1));
  CHECK(adj["type"] == "adjust");
  CHECK(adj["entries"] == json::array({json::array({0, "-inf"})}));
  CHECK(adj["events"] == json::array());
}

TEST_CASE("error codes") {
  Connection c;
  CHECK(reply(c, step_line(-1))["code"] == "not_initialized");
  CHECK(reply(c, "{not json")["code"] == "malformed");
  CHECK(reply(c, "{\"type\":\"dance\"}")["code"] == "malformed");
  auto bad = small_config_json();
  bad["section_token_budget"] = 0;
  const auto err = reply(c, init_line(bad));
  CHECK(err["code"] == "invalid_config");
  CHECK(err["detail"].get<std::string>().find("section_token_budget") != std::string::npos);
  bad = small_config_json();
  bad["titles"] = json::array();
  CHECK(reply(c, init_line(bad))["code"] == "invalid_config");
  bad = small_config_json();
  bad["grace"] = "soon";
  CHECK(reply(c, init_line(bad))["code"] == "invalid_config");
  CHECK_FALSE(c.closed());

  CHECK(reply(c, init_line(small_config_json()))["type"] == "ready");
  CHECK(reply(c, step_line(-1))["type"] == "adjust");
  // malformed input leaves the session intact
  CHECK(reply(c, "{\"type\":\"step\"}")["code"] == "malformed");
  CHECK(reply(c, "{\"type\":\"step\",\"last_token\":\"5\"}")["code"] == "malformed");
  CHECK(reply(c, step_line(3))["type"] == "adjust");
  const auto masked = reply(c, step_line(3));
  CHECK(masked["entries"] == json::array({json::array({0, "-inf"}), json::array({4, "-inf"})}));

  // a second init is a protocol violation and tears the session down
  CHECK(reply(c, init_line(small_config_json()))["code"] == "protocol");
  CHECK(c.closed());
  CHECK(reply(c, step_line(3))["code"] == "session_closed");
}

TEST_CASE("close and finish") {
  Connection c;
  reply(c, init_line(small_config_json()));
  CHECK(reply(c, "{\"type\":\"close\"}")["type"] == "done");
  CHECK(c.closed());

  Connection d;
  reply(d, init_line(small_config_json()));
  reply(d, step_line(-1));
  CHECK(reply(d, step_line(0))["type"] == "done");  // EOS ends the session
  CHECK(reply(d, step_line(5))["code"] == "session_closed");
  CHECK(d.closed());
}

TEST_CASE("config JSON round trip") {
  const auto cfg = config_from_json(small_config_json());
  CHECK(cfg.total_sections == 2);
  CHECK(cfg.title_template(2) == std::vector<token_id>{7, 9});
  const auto j = config_to_json(cfg);
  CHECK(j["titles"] == small_config_json()["titles"]);
  CHECK(j["mode"] == "sectioned");
  const auto again = config_from_json(j);
  CHECK(again.end_marker == cfg.end_marker);
  CHECK(again.banned_phrases == cfg.banned_phrases);
}

TEST_CASE("adjust messages decode to the same adjustment") {
  LogitAdjustment a;
  a.entries = {{0, kMask}, {5, 15.0}, {9, 2.5}};
  a.events = {GuidanceEvent::section_advanced, GuidanceEvent::hard_trigger};
  const auto j = adjustment_to_json(a);
  CHECK(j.dump() == R"({"entries":[[0,"-inf"],[5,15.0],[9,2.5]],"events":["section_advanced","hard_trigger"],"type":"adjust"})");
  CHECK(adjustment_from_json(j) == a);
  auto wrong = j;
  wrong["entries"][0][1] = "inf";
  CHECK_THROWS_AS(adjustment_from_json(wrong), FormatError);
}

TEST_CASE("bridged adjustments equal in-process adjustments on recorded toy sessions") {
  for (const auto& rec : record_toy_sessions()) {
    Session local(rec.config);
    Connection remote;
    REQUIRE(reply(remote, init_line(config_to_json(rec.config)))["type"] == "ready");

    std::string expected = adjustment_to_json(local.step(kStartToken)).dump();
    CHECK(remote.handle(step_line(kStartToken)) == expected);
    std::size_t compared = 1;
    for (token_id tok : rec.stream) {
      const auto adj = local.step(tok);
      expected = local.finished() ? json{{"type", "done"}}.dump() : adjustment_to_json(adj).dump();
      REQUIRE(remote.handle(step_line(tok)) == expected);
      ++compared;
      if (local.finished()) break;
    }
    CHECK(compared == rec.stream.size() + 1);
  }
}

TEST_CASE("stream serving answers every line in order") {
  std::stringstream in, out;
  in << step_line(-1) << "\n" << init_line(small_config_json()) << "\n\n" << step_line(-1) << "\n"
     << "garbage\n" << "{\"type\":\"close\"}\n" << step_line(3) << "\n";
  serve(in, out);
  std::vector<json> replies;
  for (std::string line; std::getline(out, line);) replies.push_back(json::parse(line));
  REQUIRE(replies.size() == 5);
  CHECK(replies[0]["code"] == "not_initialized");
  CHECK(replies[1]["type"] == "ready");
  CHECK(replies[2]["type"] == "adjust");
  CHECK(replies[3]["code"] == "malformed");
  CHECK(replies[4]["type"] == "done");
}

TEST_CASE("loopback socket, one session per connection") {
  std::atomic<bool> stop{false};
  std::promise<std::uint16_t> bound;
  ListenOptions opts;
  opts.stop = &stop;
  opts.on_listening = [&](std::uint16_t p) { bound.set_value(p); };
  std::thread server([&] { serve_tcp(opts); });
  const auto port = bound.get_future().get();

  const int a = connect_local(port);
  const int b = connect_local(port);
  CHECK(json::parse(roundtrip(a, init_line(small_config_json())))["type"] == "ready");
  CHECK(json::parse(roundtrip(b, step_line(-1)))["code"] == "not_initialized");
  CHECK(json::parse(roundtrip(a, step_line(-1)))["type"] == "adjust");
  CHECK(json::parse(roundtrip(a, "{\"type\":\"close\"}"))["type"] == "done");
  ::close(a);
  ::close(b);

  stop = true;
  server.join();
}

}  // TEST_SUITE
