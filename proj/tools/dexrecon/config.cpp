#include "dexrecon/config.hpp"

#include <algorithm>
#include <map>

#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon::cli {

namespace {

std::string option_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

bool given(const std::vector<std::string>& args, const std::string& name) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == name || a.rfind(name + "=", 0) == 0;
  });
}

std::string scalar_token(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_double(v.get<double>());
  fail(ErrorCode::Usage, "config key '" + key + "' has an unsupported value");
}

}  // namespace

std::vector<std::string> apply_config_file(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorCode::Usage, "--config needs a file argument");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  const Json cfg = read_json_file(path);
  if (!cfg.is_object()) fail(ErrorCode::IoFormat, "config file must hold a JSON object");

  const CLI::App* sub = nullptr;
  for (const std::string& a : args) {
    for (const CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub) break;
  }
  if (!sub) return args;

  std::map<std::string, Json> settings;
  for (const auto& [key, value] : cfg.items()) {
    if (!value.is_object()) settings[option_name(key)] = value;
  }
  if (cfg.contains(sub->get_name())) {
    for (const auto& [key, value] : cfg.at(sub->get_name()).items()) settings[option_name(key)] = value;
  }

  for (const auto& [name, value] : settings) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    if (!opt || given(args, name)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(name);
      continue;
    }
    args.push_back(name);
    if (value.is_array()) {
      for (const Json& v : value) args.push_back(scalar_token(v, name));
    } else {
      args.push_back(scalar_token(value, name));
    }
  }
  return args;
}

}  // namespace dexrecon::cli
