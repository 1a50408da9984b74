#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace sparsetail::cli {

struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<int> depth;
  std::optional<std::filesystem::path> out;
  std::optional<bool> exhaustive;
  bool seedless = false;
};

enum ExitCode : int { Clean = 0, Violations = 1, Failure = 2 };

/// Subcommands: scale, tail, pattern, synth, analyze, demo.
/// Returns 0 iff the run finished without errors or violations.
int run(const std::string& command, const Options& options, std::ostream& out, std::ostream& err);

}  // namespace sparsetail::cli
