#pragma once

#include <string>
#include <vector>

namespace predacgan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDivergence = 3;

// args excludes the program name; args[0] is the subcommand.
int run(const std::vector<std::string>& args);

}  // namespace predacgan::cli
