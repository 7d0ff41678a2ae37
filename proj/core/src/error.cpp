#include "rac/error.hpp"

namespace rac {
namespace {

std::string Render(const std::string& path, const std::string& message) {
  if (path.empty()) return message;
  return path + ": " + message;
}

}  // namespace

ValidationError::ValidationError(std::string path, std::string message)
    : Error(Render(path, message)),
      path_(std::move(path)),
      message_(std::move(message)) {}

}  // namespace rac
