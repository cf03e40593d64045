#pragma once

// Minimal JSON-over-HTTP POST used by the external engine and the judge client.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steady {

class HttpError : public std::runtime_error {
 public:
  HttpError(const std::string& what, int status = 0) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }  // 0 when no response arrived

 private:
  int status_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// POSTs `body` as application/json to `url` (http:// or, when built with
// TLS support, https://). Throws HttpError if no response arrives.
HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const std::vector<std::pair<std::string, std::string>>& headers = {},
                            int timeout_seconds = 60);

bool https_supported() noexcept;

}  // namespace steady
