#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>

namespace dexrecon::cli {

// Removes `--config FILE` from args and appends the file's settings as
// options of the selected subcommand, skipping any option already given on
// the command line. The file is a JSON object; top-level keys apply to every
// subcommand that has a matching option, and a key named after a subcommand
// holds settings for that subcommand only (these win over top-level keys).
// Keys use the long option name without dashes; '_' and '-' are equivalent.
std::vector<std::string> apply_config_file(const CLI::App& app, std::vector<std::string> args);

}  // namespace dexrecon::cli
