#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latflow::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kIoError = 3;

/// Entry point of the latflow command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latflow::cli
