#pragma once

// LLM-as-judge client: sends the evaluation prompt to a chat-completion style
// HTTP endpoint and parses the six 1..5 dimension scores.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace steady::judge {

inline constexpr std::array<std::string_view, 6> kDimensions = {
    "Relevance", "Accuracy", "Coherence", "Clarity", "Breadth and Depth", "Reading Experience"};

class JudgeFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JudgeScores {
  std::string analysis;
  std::array<int, 6> scores{};  // kDimensions order
  double uca = 0.0;             // mean score / 5 * 100
};

// Request/response shape. The prompt is placed at
// body[messages_field] = [{role_field: role, content_field: prompt}] and the
// reply text is read from the response at `response_pointer`.
struct JudgeConfig {
  std::string endpoint;
  std::string api_key;  // filled from the environment by callers
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::string model;
  std::string model_field = "model";
  std::string messages_field = "messages";
  std::string role_field = "role";
  std::string content_field = "content";
  std::string role = "user";
  std::string response_pointer = "/choices/0/message/content";
  int max_retries = 2;
  int timeout_seconds = 120;
};

// Sends a request body and returns the response body; throws on transport errors.
using Transport = std::function<std::string(const std::string& request_body)>;

Transport http_transport(const JudgeConfig& config);

std::string build_request(const JudgeConfig& config, std::string_view prompt);

// Parses the judge's reply text (one JSON object, possibly wrapped in prose or
// a code fence). Throws JudgeFailure when a dimension is missing or not an
// integer in 1..5.
JudgeScores parse_scores(std::string_view reply);

// Extracts the reply text from a raw response body via config.response_pointer.
std::string extract_reply(const JudgeConfig& config, std::string_view response_body);

// Renders the prompt, then tries up to 1 + max_retries times.
JudgeScores judge_score(std::string_view user_request, std::string_view model_response,
                        const JudgeConfig& config, const Transport& transport);

}  // namespace steady::judge
