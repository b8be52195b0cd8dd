#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "dexrecon/commands.hpp"
#include "dexrecon/config.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace {

int report(dexrecon::ErrorCode code, const std::string& message) {
  dexrecon::Json j;
  j["error"] = std::string(dexrecon::error_code_name(code));
  j["message"] = message;
  std::cerr << j.dump() << "\n";
  switch (code) {
    case dexrecon::ErrorCode::IoMissing: return 2;
    case dexrecon::ErrorCode::Usage:
    case dexrecon::ErrorCode::UnknownSubcommand: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("dexrecon: retargeting, contact refinement, grasp recovery, demo synthesis and calibration tools",
               "dexrecon");
  app.footer(dexrecon::cli::kFormatsHelp);
  app.require_subcommand(1);
  app.add_option("--config", "JSON file with option defaults (explicit flags win)");
  auto run = dexrecon::cli::register_commands(app);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = dexrecon::cli::apply_config_file(app, std::move(args));
    if (!args.empty() && args[0].rfind("-", 0) != 0) {
      bool known = false;
      for (const CLI::App* s : app.get_subcommands({})) known = known || s->get_name() == args[0];
      if (!known) return report(dexrecon::ErrorCode::UnknownSubcommand, "unknown subcommand '" + args[0] + "'");
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(dexrecon::ErrorCode::Usage, e.what());
  } catch (const dexrecon::Error& e) {
    return report(e.code(), e.what());
  }

  try {
    run();
  } catch (const dexrecon::Error& e) {
    return report(e.code(), e.what());
  } catch (const std::exception& e) {
    return report(dexrecon::ErrorCode::InvalidArgument, e.what());
  }
  return 0;
}
