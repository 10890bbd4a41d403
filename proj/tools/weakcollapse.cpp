// Copyright 2026 The weakcollapse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point:
//
//   weakcollapse [run] <experiment> [mode] [--key value ...]
//   weakcollapse validate <experiment> [--key value ...]
//
// Every config key is also a flag (underscores become dashes). Values from
// --config are applied first and flags override them.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/experiment.hpp"

namespace {

namespace ex = weakcollapse::experiment;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Invocation {
  std::string experiment;
  bool validate_only = false;
  std::map<std::string, std::string> values;  // set flags only
  std::string mode;                           // behavior positional mode
};

struct Globals {
  std::string config_path;
  std::string out_path;
};

void add_experiment(CLI::App& parent, const std::string& name, bool validate_only, Invocation& inv,
                    std::map<std::string, std::string>& storage) {
  CLI::App* sub = parent.add_subcommand(name, "run the " + name + " experiment");
  sub->fallthrough();
  for (const auto& key : ex::experiment_keys(name)) {
    std::string help = key.help;
    if (!key.default_value.empty()) help += " (default: " + key.default_value + ")";
    sub->add_option(flag_name(key.name), storage[name + "." + key.name], help);
  }
  if (name == "behavior") sub->add_option("MODE", inv.mode, "evaluate, generate or classify (same as --mode)");
  sub->callback([&inv, &storage, sub, name, validate_only] {
    inv.experiment = name;
    inv.validate_only = validate_only;
    for (const auto& key : ex::experiment_keys(name)) {
      if (sub->count(flag_name(key.name)) > 0) inv.values[key.name] = storage[name + "." + key.name];
    }
  });
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collapse-policy, contextuality and signaling experiments"};
  app.require_subcommand(1);

  Invocation inv;
  Globals globals;
  std::map<std::string, std::string> storage, global_values;
  app.add_option("--seed", global_values["seed"], "master seed (default: 0)");
  app.add_option("--trials", global_values["trials"], "trial count (default: per experiment)");
  app.add_option("--format", global_values["format"], "json-lines or csv (default: json-lines)");
  app.add_option("--records", global_values["records"], "emit per-trial records: true or false");
  app.add_option("--config", globals.config_path, "key = value config file");
  app.add_option("--out", globals.out_path, "write the report here instead of standard output");

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  for (CLI::App* group : {run, validate}) {
    group->fallthrough();
    group->require_subcommand(1);
  }
  for (const auto& name : ex::experiment_names()) {
    add_experiment(app, name, false, inv, storage);
    add_experiment(*run, name, false, inv, storage);
    add_experiment(*validate, name, true, inv, storage);
  }

  CLI11_PARSE(app, argc, argv);

  ex::Config config;
  try {
    if (!globals.config_path.empty()) {
      std::ifstream in(globals.config_path, std::ios::binary);
      if (!in) throw weakcollapse::ConfigError("cannot read config '" + globals.config_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      config = ex::parse_config_text(text.str());
      const auto it = config.find("experiment");
      if (it != config.end() && it->second != inv.experiment) {
        throw weakcollapse::ConfigError("config file is for experiment '" + it->second + "', not '" +
                                        inv.experiment + "'");
      }
    }
  } catch (const weakcollapse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  config["experiment"] = inv.experiment;
  for (const auto& key : {"seed", "trials", "format", "records"}) {
    if (app.count(flag_name(key)) > 0) config[key] = global_values[key];
  }
  for (const auto& [key, value] : inv.values) config[key] = value;
  if (!inv.mode.empty()) config["mode"] = inv.mode;

  const auto violations = ex::validate(config);
  if (inv.validate_only) {
    std::string text;
    for (const auto& v : violations) text += v.key + ": " + v.message + "\n";
    if (violations.empty()) text = "ok\n";
    const int rc = emit(text, globals.out_path);
    return rc != 0 ? rc : (violations.empty() ? 0 : 2);
  }
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "error: " << v.key << ": " << v.message << "\n";
    return 2;
  }
  try {
    return emit(ex::render(ex::run(config)), globals.out_path);
  } catch (const weakcollapse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
