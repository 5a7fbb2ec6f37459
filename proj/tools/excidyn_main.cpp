#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "excidyn/run.hpp"
#include "excidyn/version.hpp"

namespace {

int exit_code_for(excidyn::ErrorCategory category) {
  switch (category) {
    case excidyn::ErrorCategory::config: return 2;
    case excidyn::ErrorCategory::numeric: return 3;
    case excidyn::ErrorCategory::io: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"excidyn: excitonic open-system dynamics toolkit"};
  app.set_version_flag("--version", std::string(excidyn::version_string));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> set_pairs;
  std::vector<std::string> names;
  for (const auto& [name, cmd] : excidyn::command_names()) {
    (void)cmd;
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "path to a key/value config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--set", set_pairs, "override a config key as key=value");
    names.push_back(name);
  }

  CLI11_PARSE(app, argc, argv);

  std::string subcommand;
  for (const std::string& name : names)
    if (app.got_subcommand(name)) subcommand = name;

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const std::string& pair : set_pairs) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "ERROR ConfigError: --set expects key=value, got '" << pair
                << "'\n";
      return 2;
    }
    overrides.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
  }

  try {
    excidyn::run_from_file(config_path, out_dir, overrides, subcommand);
  } catch (const excidyn::Error& e) {
    std::cerr << "ERROR " << e.code() << ": " << e.detail() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "ERROR Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
