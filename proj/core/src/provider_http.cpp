#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "rac/error.hpp"
#include "rac/provider.hpp"
#include "rac/random.hpp"

namespace rac {

json ChatRequest::to_json() const {
  return {{"model", model},
          {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
          {"temperature", temperature},
          {"top_p", top_p},
          {"frequency_penalty", frequency_penalty},
          {"presence_penalty", presence_penalty}};
}

std::chrono::milliseconds RetryPolicy::delay(int retry,
                                             std::uint64_t jitter_seed) const {
  const double base = static_cast<double>(initial.count()) *
                      std::pow(factor, std::max(retry, 0));
  double ms = std::min(base, static_cast<double>(cap.count()));
  if (jitter) {
    SeededRng rng(jitter_seed + static_cast<std::uint64_t>(retry));
    ms = ms * (0.5 + 0.5 * rng.unit());
  }
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string complete_with_retry(ChatProvider& provider,
                                const ChatRequest& request,
                                const RetryPolicy& policy, int max_retries,
                                const Sleeper& sleep, int* attempts) {
  const std::uint64_t seed = fnv1a64(request.prompt);
  for (int attempt = 1;; ++attempt) {
    if (attempts) *attempts = attempt;
    try {
      return provider.complete(request);
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt > max_retries) throw;
      sleep(policy.delay(attempt - 1, seed));
    }
  }
}

HttpChatProvider::HttpChatProvider(std::string base_url, std::string api_key,
                                   std::chrono::seconds timeout)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  const auto scheme_end = base_url_.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must look like http(s)://host[:port][/path], got \"" +
                      base_url_ + "\"");
  }
  const auto path_start = base_url_.find('/', scheme_end + 3);
  host_ = base_url_.substr(0, path_start);
  path_ = (path_start == std::string::npos ? std::string() : base_url_.substr(path_start)) +
          "/chat/completions";
}

std::unique_ptr<HttpChatProvider> HttpChatProvider::from_env(std::string base_url) {
  const char* key = std::getenv("RAC_API_KEY");
  return std::make_unique<HttpChatProvider>(std::move(base_url), key ? key : "");
}

std::string HttpChatProvider::complete(const ChatRequest& request) {
  httplib::Client cli(host_);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  cli.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = cli.Post(path_, headers, request.to_json().dump(), "application/json");
  if (!res) {
    throw ProviderError("transport error contacting " + base_url_ + ": " +
                            httplib::to_string(res.error()),
                        true);
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw ProviderError("authentication failed (HTTP " + std::to_string(status) +
                            "); check RAC_API_KEY",
                        false, status);
  }
  if (status == 429 || status >= 500) {
    throw ProviderError("HTTP " + std::to_string(status) + " from " + base_url_,
                        true, status);
  }
  if (status < 200 || status >= 300) {
    throw ProviderError("HTTP " + std::to_string(status) + ": " + res->body, false,
                        status);
  }
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) {
    throw ProviderError("response body is not JSON", true, status);
  }
  return extract_completion_text(body);
}

std::string extract_completion_text(const json& response) {
  if (!response.is_object() || !response.contains("choices") ||
      !response.at("choices").is_array() || response.at("choices").empty()) {
    throw ProviderError("response has no choices", true);
  }
  const json& first = response.at("choices").at(0);
  if (!first.contains("message") || !first.at("message").contains("content") ||
      !first.at("message").at("content").is_string()) {
    throw ProviderError("response choice has no message content", true);
  }
  return first.at("message").at("content").get<std::string>();
}

}  // namespace rac
