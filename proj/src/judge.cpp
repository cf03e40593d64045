#include "steady/judge.hpp"

#include <json.hpp>

#include "steady/http.hpp"
#include "steady/prompts.hpp"

namespace steady::judge {

namespace {

using nlohmann::json;

// First balanced JSON object in text, honouring string escapes.
std::string_view first_object(std::string_view s) {
  for (auto start = s.find('{'); start != std::string_view::npos; start = s.find('{', start + 1)) {
    int depth = 0;
    bool in_str = false, esc = false;
    for (std::size_t i = start; i < s.size(); ++i) {
      const char c = s[i];
      if (in_str) {
        if (esc) esc = false;
        else if (c == '\\') esc = true;
        else if (c == '"') in_str = false;
        continue;
      }
      if (c == '"') in_str = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        auto candidate = s.substr(start, i - start + 1);
        if (json::accept(candidate)) return candidate;
        break;
      }
    }
  }
  return {};
}

}  // namespace

std::string build_request(const JudgeConfig& config, std::string_view prompt) {
  json body = json::object();
  if (!config.model.empty()) body[config.model_field] = config.model;
  body[config.messages_field] = json::array(
      {json{{config.role_field, config.role}, {config.content_field, std::string(prompt)}}});
  return body.dump();
}

JudgeScores parse_scores(std::string_view reply) {
  const auto obj = first_object(reply);
  if (obj.empty()) throw JudgeFailure("judge reply contains no JSON object");
  const auto j = json::parse(obj);

  JudgeScores out;
  if (auto it = j.find("Analysis"); it != j.end())
    out.analysis = it->is_string() ? it->get<std::string>() : it->dump();
  double sum = 0.0;
  for (std::size_t i = 0; i < kDimensions.size(); ++i) {
    const std::string key(kDimensions[i]);
    const auto it = j.find(key);
    if (it == j.end()) throw JudgeFailure("judge reply lacks \"" + key + "\"");
    if (!it->is_number_integer() && !it->is_number_unsigned())
      throw JudgeFailure("judge score \"" + key + "\" is not an integer");
    const auto v = it->get<std::int64_t>();
    if (v < 1 || v > 5) throw JudgeFailure("judge score \"" + key + "\" outside 1..5");
    out.scores[i] = static_cast<int>(v);
    sum += static_cast<double>(v);
  }
  out.uca = sum / static_cast<double>(kDimensions.size()) / 5.0 * 100.0;
  return out;
}

std::string extract_reply(const JudgeConfig& config, std::string_view response_body) {
  const auto j = json::parse(response_body, nullptr, false);
  if (j.is_discarded()) throw JudgeFailure("judge response is not JSON");
  try {
    const auto& v = j.at(json::json_pointer(config.response_pointer));
    return v.is_string() ? v.get<std::string>() : v.dump();
  } catch (const json::exception& e) {
    throw JudgeFailure("judge response lacks " + config.response_pointer + ": " + e.what());
  }
}

Transport http_transport(const JudgeConfig& config) {
  return [config](const std::string& body) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (!config.api_key.empty()) headers.emplace_back(config.auth_header, config.auth_prefix + config.api_key);
    const auto res = http_post_json(config.endpoint, body, headers, config.timeout_seconds);
    if (res.status < 200 || res.status >= 300)
      throw HttpError("judge endpoint returned HTTP " + std::to_string(res.status), res.status);
    return res.body;
  };
}

JudgeScores judge_score(std::string_view user_request, std::string_view model_response,
                        const JudgeConfig& config, const Transport& transport) {
  const std::string request = build_request(config, prompts::render_judge(user_request, model_response));
  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    try {
      return parse_scores(extract_reply(config, transport(request)));
    } catch (const JudgeFailure& e) {
      last_error = e.what();
    } catch (const HttpError& e) {
      last_error = e.what();
    } catch (const json::exception& e) {
      last_error = e.what();
    }
  }
  throw JudgeFailure("judge failed after " + std::to_string(config.max_retries + 1) +
                     " attempts: " + last_error);
}

}  // namespace steady::judge
