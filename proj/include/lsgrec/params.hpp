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

#include <optional>
#include <string>

#include "lsgrec/graphs.hpp"
#include "lsgrec/linkstream.hpp"

namespace lsgrec {

// One point of the hyperparameter space. Fields a flavor does not use are
// ignored (and left empty by the sampler).
struct ParamSetting {
  std::optional<Timestamp> delta;  // STG session duration, seconds
  std::optional<double> beta;      // STG long-term preference
  std::optional<double> eta_s;     // STG and LSG weight towards the past
  double alpha = 0.15;             // damping factor
  int n = 10;                      // recommendation list length

  friend bool operator==(const ParamSetting&, const ParamSetting&) = default;
};

// Throws std::invalid_argument naming the first missing or out-of-range
// field required by `flavor`.
void ValidateSetting(const ParamSetting& setting, GraphFlavor flavor);

// Builds the flavor's graph with the setting's parameters.
RecGraph BuildGraph(const LinkStream& stream, GraphFlavor flavor, const ParamSetting& setting);

// Compact human-readable form, e.g. "alpha=0.15 eta_s=0.1 n=10".
std::string Describe(const ParamSetting& setting, GraphFlavor flavor);

}  // namespace lsgrec
