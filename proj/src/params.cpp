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

#include "lsgrec/params.hpp"

#include <sstream>
#include <stdexcept>

namespace lsgrec {

void ValidateSetting(const ParamSetting& setting, GraphFlavor flavor) {
  if (!(setting.alpha > 0.0 && setting.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (setting.n < 1) throw std::invalid_argument("n must be at least 1");
  if (flavor == GraphFlavor::kStg) {
    if (!setting.delta) throw std::invalid_argument("stg requires delta");
    if (*setting.delta <= 0) throw std::invalid_argument("delta must be positive");
    if (!setting.beta) throw std::invalid_argument("stg requires beta");
    if (!(*setting.beta >= 0.0 && *setting.beta <= 1.0)) {
      throw std::invalid_argument("beta must lie in [0, 1]");
    }
  }
  if (flavor == GraphFlavor::kStg || flavor == GraphFlavor::kLsg) {
    if (!setting.eta_s) {
      throw std::invalid_argument(std::string(FlavorName(flavor)) + " requires eta_s");
    }
    if (!(*setting.eta_s >= 0.0)) throw std::invalid_argument("eta_s must be non-negative");
  }
}

RecGraph BuildGraph(const LinkStream& stream, GraphFlavor flavor, const ParamSetting& setting) {
  ValidateSetting(setting, flavor);
  switch (flavor) {
    case GraphFlavor::kBip:
      return BuildBip(stream);
    case GraphFlavor::kStg:
      return BuildStg(stream, *setting.delta, *setting.eta_s);
    case GraphFlavor::kLsg:
      return BuildLsg(stream, *setting.eta_s);
  }
  throw std::invalid_argument("unknown graph flavor");
}

std::string Describe(const ParamSetting& setting, GraphFlavor flavor) {
  std::ostringstream out;
  out << "alpha=" << setting.alpha;
  if (flavor == GraphFlavor::kStg) {
    out << " delta_days=" << static_cast<double>(setting.delta.value_or(0)) / kSecondsPerDay
        << " beta=" << setting.beta.value_or(0.0);
  }
  if (flavor != GraphFlavor::kBip) out << " eta_s=" << setting.eta_s.value_or(0.0);
  out << " n=" << setting.n;
  return out.str();
}

}  // namespace lsgrec
