#pragma once

#include <stdexcept>
#include <string>

namespace rac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A record or pair violates the schema or a structural invariant. `path`
// names the offending field in dotted form ("choices.D", "explanations.C").
class ValidationError : public Error {
 public:
  ValidationError(std::string path, std::string message);

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

// Bad flags, bad parameters, unreadable inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a chat-completion endpoint. Retryable failures are
// transport errors, 429 and 5xx; authentication failures are not.
class ProviderError : public Error {
 public:
  ProviderError(std::string message, bool retryable, int status = 0)
      : Error(std::move(message)), retryable_(retryable), status_(status) {}

  bool retryable() const noexcept { return retryable_; }
  int status() const noexcept { return status_; }

 private:
  bool retryable_;
  int status_;
};

}  // namespace rac
