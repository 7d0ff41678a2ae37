#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rac::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kProviderExhausted = 3;

// Runs one rac-forge subcommand. argv[0] is the program name.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: args exclude the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rac::cli
