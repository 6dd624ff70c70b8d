// Copyright 2026 The lsgrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsgrec/graphs.hpp"
#include "lsgrec/linkstream.hpp"
#include "lsgrec/tuning.hpp"

namespace lsgrec::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInputError = 2,
  kNothingEvaluated = 3,
};

enum class Command { kEvaluate, kSearch, kInspect };

struct RunConfig {
  Command command = Command::kEvaluate;
  std::string input;
  std::optional<InputFormat> format;
  std::optional<ColumnMap> columns;
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;
  FilterConfig filter;
  bool positive_filter = false;
  int windows = 8;
  int n = 10;
  std::optional<GraphFlavor> graph;
  // Exactly one of `setting` (evaluate) or `grid` (search) is set.
  std::optional<ParamSetting> setting;
  std::optional<ParamGrid> grid;
  int count = 50;
  std::uint64_t seed = 0;
  Objective objective = Objective::kF1;
  double tol = 1e-10;
  int max_iter = 100;
  std::string out_dir = ".";
  int workers = 1;
  std::optional<std::string> export_graph;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates command-line arguments (and an optional --config
// key=value file; flags win). Throws ConfigError. `help` is set and the
// config left partial when --help was requested.
RunConfig ParseArgs(int argc, const char* const* argv, std::string* help = nullptr);

// Effective configuration, embedded in every report.
nlohmann::json ConfigToJson(const RunConfig& config);

// Loads the input and applies the configured filters.
LinkStream LoadStream(const RunConfig& config);

int CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdSearch(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdInspect(const RunConfig& config, std::ostream& out, std::ostream& err);

// Entry point used by the executable.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lsgrec::cli
