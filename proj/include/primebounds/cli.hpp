#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace primebounds {

// Exit codes of the command-line frontend.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `primebounds` tool, with injectable streams for tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace primebounds
