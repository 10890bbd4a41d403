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

#pragma once

// Experiment configs and reports.
//
// A config is a flat key -> value map. Every experiment has a fixed key
// schema; unknown keys are rejected. `resolve` fills defaults, and the
// resolved map is what a report echoes, so an echo always revalidates.
// Reports are deterministic given the config except for the duration field.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace weakcollapse::experiment {

using Config = std::map<std::string, std::string>;
using Json = nlohmann::ordered_json;

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

struct Violation {
  std::string key;
  std::string message;
};

/// ks, fwt, signal, energy, sat, asc, behavior.
const std::vector<std::string>& experiment_names();

/// Keys accepted by every experiment (experiment, seed, trials, format, records).
const std::vector<KeySpec>& common_keys();
/// Experiment-specific keys. Throws ConfigError for an unknown experiment.
const std::vector<KeySpec>& experiment_keys(const std::string& experiment);

/// Empty iff the config is runnable. Each violation names its key.
std::vector<Violation> validate(const Config& config);

/// Validated config with every default filled in. Throws ConfigError listing
/// the violations.
Config resolve(const Config& config);

/// `key = value` lines; '#' starts a comment. Throws ConfigError on a
/// malformed line or a repeated key.
Config parse_config_text(std::string_view text);

struct Report {
  Config config;
  std::vector<Json> records;
  Json aggregate;
  double duration_seconds = 0.0;
  /// Set by modes whose output is a data file rather than a report
  /// (behavior generate); rendered verbatim.
  std::optional<std::string> payload;
};

/// Dispatches to the experiment's harness. Domain errors are rethrown with
/// the experiment name prefixed to the message.
Report run(const Config& config);

/// json-lines: config record, optional trial records, aggregate, timing.
/// csv: aggregate as key,value rows followed by the duration.
std::string render(const Report& report);

/// `render` without the timing line, for determinism checks.
std::string render_without_duration(const Report& report);

}  // namespace weakcollapse::experiment
