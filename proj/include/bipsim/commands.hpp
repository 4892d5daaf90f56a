#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "bipsim/config.hpp"

namespace bipsim {

enum class Command { Eigs, Evolve, DualityScan, GapScan, CollapseStats };

Command command_from_name(std::string_view name);  // ConfigError on unknown
std::string_view command_name(Command cmd);

struct RunResult {
  std::vector<std::filesystem::path> outputs;
};

// Executes one subcommand: writes its CSV output(s) plus manifest.txt into
// cfg.output_dir and returns the paths. CSV bytes depend only on config and
// seed; only the manifest carries timestamp and wall time.
RunResult run_command(Command cmd, const RunConfig& cfg);

// Process exit code for a failure: 2 config/usage, 3 numeric, 4 I/O.
int exit_code_for(const std::exception& error);

// Single machine-readable diagnostic line, e.g.
//   error: category=config message="duplicate key 'grid.x_min' (lines 3, 7)"
void print_error_line(std::ostream& out, const std::exception& error);

}  // namespace bipsim
