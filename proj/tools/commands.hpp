#pragma once

#include "config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace robinlab::cli {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kFinding = 3, kInconclusive = 4 };

const std::vector<std::string>& command_names();

/// Runs one command writing into `out`. Returns the exit code; throws
/// ConfigError or ApiError.
int run_command(const std::string& command, const Config& cfg, const std::filesystem::path& out);

/// run_command with every failure turned into an exit code and a message on stderr.
int run_reporting(const std::string& command, const Config& cfg, const std::filesystem::path& out);

}  // namespace robinlab::cli
