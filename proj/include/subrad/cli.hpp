#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "subrad/io.hpp"

namespace subrad {

/// Command-line options shared by all subcommands; config-file values are
/// overridden by explicit flags.
struct CliOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

/// Runs one subcommand from a config JSON (or a previous run's manifest) and
/// writes CSV outputs plus manifest.json into out_dir. Returns the resolved
/// config actually used.
json run_command(const std::string& command, const CliOptions& opts);

/// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 infeasible
/// optimization.
int cli_main(int argc, char** argv);

}  // namespace subrad
