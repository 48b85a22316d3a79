#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parcorr::cli {

// Exit codes of the parcorr tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad flags or configuration
inline constexpr int kExitData = 2;   // unreadable, invalid or degenerate data

// Runs `parcorr <subcommand> ...`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace parcorr::cli
