#include "steady/bridge.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <system_error>
#include <thread>
#include <vector>

namespace steady::bridge {

namespace {

using nlohmann::json;

std::atomic<std::uint64_t> g_next_session{1};

class Malformed : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::array<GuidanceEvent, 5> kEvents = {
    GuidanceEvent::soft_trigger, GuidanceEvent::hard_trigger, GuidanceEvent::section_advanced,
    GuidanceEvent::eos_unbanned, GuidanceEvent::title_in_progress};

GuidanceEvent parse_event(std::string_view name) {
  for (auto e : kEvents)
    if (to_string(e) == name) return e;
  throw FormatError("unknown guidance event: " + std::string(name));
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "wrong type");
  }
}

std::vector<token_id> token_list(const json& j, const char* key) {
  return field<std::vector<token_id>>(j, key, {});
}

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void serve_socket(int fd) {
  Connection conn;
  std::string buffer;
  char chunk[4096];
  while (!conn.closed()) {
    const auto n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n', start)) {
      std::string_view line(buffer.data() + start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      if (!write_all(fd, conn.handle(line) + "\n")) {
        close_fd(fd);
        return;
      }
      if (conn.closed()) break;
    }
    buffer.erase(0, start);
  }
  close_fd(fd);
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_initialized: return "not_initialized";
    case ErrorCode::malformed: return "malformed";
    case ErrorCode::protocol: return "protocol";
    case ErrorCode::invalid_config: return "invalid_config";
    case ErrorCode::session_closed: return "session_closed";
  }
  return "unknown";
}

GuidanceConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be an object");
  GuidanceConfig c;
  c.total_sections = field(j, "total_sections", c.total_sections);
  c.section_token_budget = field(j, "section_token_budget", c.section_token_budget);
  c.grace = field(j, "grace", c.grace);
  c.boost = field(j, "boost", c.boost);
  c.interruption_tokens = token_list(j, "interruption_tokens");
  c.banned_phrases = field<std::vector<std::vector<token_id>>>(j, "banned_phrases", {});
  c.eos_token = field(j, "eos_token", c.eos_token);
  c.end_marker = token_list(j, "end_marker");
  const auto mode = field<std::string>(j, "mode", "sectioned");
  if (mode == "sectioned") c.mode = GuidanceMode::sectioned;
  else if (mode == "free_form") c.mode = GuidanceMode::free_form;
  else throw ConfigError("mode", "expected sectioned or free_form");
  c.freeform_target_tokens = field(j, "freeform_target_tokens", c.freeform_target_tokens);
  if (const auto it = j.find("checkpoint_bounds"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() || !(*it)[1].is_number_integer())
      throw ConfigError("checkpoint_bounds", "expected [low, high]");
    c.checkpoint_bounds = {(*it)[0].get<int>(), (*it)[1].get<int>()};
  }

  auto titles = field<std::vector<std::vector<token_id>>>(j, "titles", {});
  if (c.mode == GuidanceMode::sectioned && c.total_sections > 1 &&
      static_cast<int>(titles.size()) < c.total_sections)
    throw ConfigError("titles", "need one tokenization per section (titles[p-1] heads section p)");
  if (!titles.empty())
    c.title_template = [titles = std::move(titles)](int p) -> std::vector<token_id> {
      if (p < 1 || p > static_cast<int>(titles.size())) return {};
      return titles[static_cast<std::size_t>(p) - 1];
    };
  c.validate();
  return c;
}

json config_to_json(const GuidanceConfig& c) {
  json j = {{"total_sections", c.total_sections},
            {"section_token_budget", c.section_token_budget},
            {"grace", c.grace},
            {"boost", c.boost},
            {"interruption_tokens", c.interruption_tokens},
            {"banned_phrases", c.banned_phrases},
            {"eos_token", c.eos_token},
            {"end_marker", c.end_marker},
            {"mode", c.mode == GuidanceMode::sectioned ? "sectioned" : "free_form"},
            {"freeform_target_tokens", c.freeform_target_tokens},
            {"checkpoint_bounds", {c.checkpoint_bounds.low, c.checkpoint_bounds.high}}};
  json titles = json::array();
  if (c.title_template && c.mode == GuidanceMode::sectioned)
    for (int p = 1; p <= c.total_sections; ++p) titles.push_back(c.title_template(p));
  j["titles"] = titles;
  return j;
}

json adjustment_to_json(const LogitAdjustment& adj) {
  json entries = json::array();
  for (const auto& e : adj.entries)
    entries.push_back(e.masked() ? json::array({e.token, "-inf"}) : json::array({e.token, e.bias}));
  json events = json::array();
  for (auto e : adj.events) events.push_back(to_string(e));
  return json{{"type", "adjust"}, {"entries", entries}, {"events", events}};
}

LogitAdjustment adjustment_from_json(const json& j) {
  if (j.value("type", std::string()) != "adjust") throw FormatError("not an adjust message");
  LogitAdjustment adj;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 2) throw FormatError("adjust entry must be [id, bias]");
    BiasEntry b;
    b.token = e[0].get<token_id>();
    if (e[1].is_string()) {
      if (e[1].get<std::string>() != "-inf") throw FormatError("bias string must be \"-inf\"");
      b.bias = kMask;
    } else {
      b.bias = e[1].get<double>();
    }
    adj.entries.push_back(b);
  }
  for (const auto& e : j.at("events")) adj.events.push_back(parse_event(e.get<std::string>()));
  return adj;
}

Connection::Connection() = default;

std::string Connection::error(ErrorCode code, const std::string& detail) {
  return json{{"type", "error"}, {"code", to_string(code)}, {"detail", detail}}.dump();
}

std::string Connection::handle(std::string_view line) {
  if (closed_) return error(ErrorCode::session_closed, "connection is closed");

  const auto req = json::parse(line, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error(ErrorCode::malformed, "request is not a JSON object");
  const auto type_it = req.find("type");
  if (type_it == req.end() || !type_it->is_string())
    return error(ErrorCode::malformed, "request lacks a string \"type\"");
  const auto type = type_it->get<std::string>();

  if (type == "close") {
    closed_ = true;
    session_.reset();
    return json{{"type", "done"}}.dump();
  }

  if (type == "init") {
    if (session_ || finished_) {
      closed_ = true;
      session_.reset();
      return error(ErrorCode::protocol, "init received twice");
    }
    const auto cfg = req.find("config");
    if (cfg == req.end()) return error(ErrorCode::malformed, "init lacks \"config\"");
    try {
      session_ = std::make_unique<Session>(config_from_json(*cfg));
    } catch (const ConfigError& e) {
      return error(ErrorCode::invalid_config, e.what());
    }
    session_id_ = "s" + std::to_string(g_next_session++);
    return json{{"type", "ready"}, {"session_id", session_id_}}.dump();
  }

  if (type == "step") {
    const auto tok = req.find("last_token");
    if (tok == req.end() || !tok->is_number_integer())
      return error(ErrorCode::malformed, "step needs an integer \"last_token\"");
    const auto value = tok->get<std::int64_t>();
    if (value < kStartToken || value > std::numeric_limits<token_id>::max())
      return error(ErrorCode::malformed, "last_token out of range");
    if (finished_) {
      closed_ = true;
      return error(ErrorCode::session_closed, "session already finished");
    }
    if (!session_) return error(ErrorCode::not_initialized, "step before init");
    const auto adj = session_->step(static_cast<token_id>(value));
    if (session_->finished()) {
      finished_ = true;
      session_.reset();
      return json{{"type", "done"}}.dump();
    }
    return adjustment_to_json(adj).dump();
  }

  return error(ErrorCode::malformed, "unknown request type \"" + type + "\"");
}

void serve(std::istream& in, std::ostream& out) {
  Connection conn;
  std::string line;
  while (!conn.closed() && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << conn.handle(line) << '\n';
    out.flush();
  }
}

void serve_tcp(const ListenOptions& options) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw std::system_error(errno, std::generic_category(), "socket");
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(options.port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 16) < 0) {
    const int err = errno;
    close_fd(listener);
    throw std::system_error(err, std::generic_category(), "bind/listen on 127.0.0.1");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (options.on_listening) options.on_listening(ntohs(addr.sin_port));

  std::vector<std::thread> workers;
  while (!(options.stop && options.stop->load())) {
    pollfd pfd{listener, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back(serve_socket, fd);
  }
  close_fd(listener);
  for (auto& w : workers) w.join();
}

}  // namespace steady::bridge
