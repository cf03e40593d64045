#pragma once

// Line-delimited JSON protocol exposing a guidance Session to an external
// runtime. One JSON object per line in each direction; every request yields
// exactly one response.
//
// Requests:
//   {"type":"init","config":{...}}   -> {"type":"ready","session_id":"..."}
//   {"type":"step","last_token":N}   -> {"type":"adjust","entries":[[id,bias]...],"events":[...]}
//                                       or {"type":"done"} once the session finishes
//   {"type":"close"}                 -> {"type":"done"}
// Errors: {"type":"error","code":C,"detail":"..."} with C one of
//   not_initialized, malformed, protocol, invalid_config, session_closed.
// A mask is sent as the string "-inf". Use last_token -1 for the first step.
//
// Init config keys mirror GuidanceConfig; header tokenizations come as
// "titles": titles[p-1] heads section p.

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "steady/guidance.hpp"

namespace steady::bridge {

enum class ErrorCode { not_initialized, malformed, protocol, invalid_config, session_closed };

std::string_view to_string(ErrorCode code) noexcept;

// Throws ConfigError on missing or ill-typed fields and on invalid values.
GuidanceConfig config_from_json(const nlohmann::json& j);

// Inverse of config_from_json for the sections 1..total_sections the template covers.
nlohmann::json config_to_json(const GuidanceConfig& config);

nlohmann::json adjustment_to_json(const LogitAdjustment& adj);
LogitAdjustment adjustment_from_json(const nlohmann::json& j);

// Protocol state for one connection.
class Connection {
 public:
  Connection();

  // Handles one request line and returns the response line (no newline).
  std::string handle(std::string_view line);

  // True once the connection should be torn down (close, finished session
  // after done, or a protocol violation).
  bool closed() const noexcept { return closed_; }

 private:
  std::string error(ErrorCode code, const std::string& detail);

  std::unique_ptr<Session> session_;
  std::string session_id_;
  bool closed_ = false;
  bool finished_ = false;
};

// Serves one connection over a stream pair until close, teardown or EOF.
void serve(std::istream& in, std::ostream& out);

struct ListenOptions {
  std::uint16_t port = 0;                          // 0 picks a free port
  std::function<void(std::uint16_t)> on_listening; // called with the bound port
  const std::atomic<bool>* stop = nullptr;         // polled between accepts
};

// Accepts connections on 127.0.0.1, one thread and one session per
// connection. Returns once *stop becomes true.
void serve_tcp(const ListenOptions& options);

}  // namespace steady::bridge
