#pragma once

#include <CLI11.hpp>

namespace riglab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComparisonFailed = 2;

/// Registers the subcommands; the returned callback runs whichever one was
/// parsed and yields the process exit code.
struct Commands {
  std::function<int()> run;
};

Commands register_commands(CLI::App& app);

}  // namespace riglab::cli
