#pragma once

#include <functional>
#include <memory>

#include <CLI11.hpp>

namespace dexrecon::cli {

// Registers every subcommand on `app`. The returned function runs whichever
// subcommand was selected by the parse.
std::function<void()> register_commands(CLI::App& app);

// File formats, for --help.
extern const char* const kFormatsHelp;

}  // namespace dexrecon::cli
