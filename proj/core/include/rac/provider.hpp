#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rac/model.hpp"

namespace rac {

// One chat-completion call: a single user message plus sampling knobs.
struct ChatRequest {
  std::string model;
  std::string prompt;
  double temperature = 1.0;
  double top_p = 1.0;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;

  // OpenAI-compatible request body.
  json to_json() const;
};

// Anything that answers a ChatRequest. Implementations must be safe to call
// from several threads at once. Throws ProviderError on failure.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Exponential backoff: initial, x factor per retry, capped, with jitter
// drawn uniformly from [delay/2, delay].
struct RetryPolicy {
  std::chrono::milliseconds initial{1000};
  double factor = 2.0;
  std::chrono::milliseconds cap{30000};
  bool jitter = true;

  // Delay before retry number `retry` (0-based).
  std::chrono::milliseconds delay(int retry, std::uint64_t jitter_seed) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

// Calls `provider`, retrying retryable ProviderErrors up to `max_retries`
// times. Rethrows the last error. `attempts` receives the number of calls.
std::string complete_with_retry(ChatProvider& provider,
                                const ChatRequest& request,
                                const RetryPolicy& policy, int max_retries,
                                const Sleeper& sleep, int* attempts = nullptr);

// Speaks POST {base_url}/chat/completions with a bearer token.
class HttpChatProvider final : public ChatProvider {
 public:
  HttpChatProvider(std::string base_url, std::string api_key,
                   std::chrono::seconds timeout = std::chrono::seconds(120));

  // Reads the key from RAC_API_KEY (may be empty for local endpoints).
  static std::unique_ptr<HttpChatProvider> from_env(std::string base_url);

  std::string complete(const ChatRequest& request) override;
  std::string name() const override { return "http:" + base_url_; }

 private:
  std::string base_url_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // base path + /chat/completions
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// Pulls choices[0].message.content out of a chat-completions response body.
std::string extract_completion_text(const json& response);

}  // namespace rac
