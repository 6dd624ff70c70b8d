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

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsgrec/graphs.hpp"
#include "lsgrec/linkstream.hpp"
#include "lsgrec/params.hpp"
#include "lsgrec/ranker.hpp"

namespace lsgrec {

// Per-rank hit flags h(1..N) and prefix counts hit_k.
struct HitProfile {
  std::vector<int> flags;
  std::vector<int> prefix;

  int hits() const { return prefix.empty() ? 0 : prefix.back(); }
};

HitProfile HitsAtN(const RecommendationList& recommended, const std::set<std::string>& relevant);

struct Ratio {
  double numerator = 0.0;
  double denominator = 0.0;

  double value() const { return denominator > 0.0 ? numerator / denominator : 0.0; }
  Ratio& operator+=(const Ratio& other) {
    numerator += other.numerator;
    denominator += other.denominator;
    return *this;
  }
};

// (sum 2 * hit_N(u), sum |I_new(u)| + N). Empty input gives (0, 0).
Ratio F1Components(std::span<const int> hits, std::span<const std::size_t> relevant_sizes, int n);
// (#users with a hit, #users).
Ratio HitRatioComponents(std::span<const int> hits);
// AP_N(u) = 1/hit_N(u) * sum_k hit_k(u) * h(k) / k, and 0 without hits.
double AveragePrecision(const HitProfile& profile, int n);
// (sum AP_N(u), #users).
Ratio MapComponents(std::span<const HitProfile> profiles, int n);

struct MetricComponents {
  int window = 0;  // training ends with this window; tested on the next
  Ratio f1;
  Ratio hr;
  Ratio map;
  std::size_t users = 0;
  std::size_t nonconverged = 0;
  Timestamp recommendation_time = 0;
  bool skipped = false;
};

struct TimeAveraged {
  double f1 = 0.0;
  double hr = 0.0;
  double map = 0.0;
};

class NothingEvaluatedError : public std::runtime_error {
 public:
  NothingEvaluatedError() : std::runtime_error("nothing evaluated") {}
};

// Ratio of summed numerators to summed denominators, per metric.
TimeAveraged TimeAverage(std::span<const MetricComponents> windows);

// user -> items new to that user in the test window.
using GroundTruth = std::map<std::string, std::set<std::string>>;

// Training on W_1..W_k, testing on W_{k+1}.
struct Fold {
  int k = 0;
  LinkStream train;
  LinkStream test;
  // Last instant covered by the training windows.
  Timestamp recommendation_time = 0;
  // Only users present in training with at least one new item.
  GroundTruth truth;
  // Training items of each evaluated user.
  std::map<std::string, std::set<std::string>> seen;
};

std::vector<Fold> MakeFolds(const LinkStream& stream, int n_windows);

struct ProtocolOptions {
  int n_windows = 8;
  PageRankOptions pagerank;
  int workers = 1;
};

struct EvaluationReport {
  GraphFlavor flavor = GraphFlavor::kBip;
  ParamSetting setting;
  ProtocolOptions options;
  std::vector<MetricComponents> windows;
  // Empty when no window had an evaluable user.
  std::optional<TimeAveraged> averaged;
};

EvaluationReport RunProtocol(const LinkStream& stream, GraphFlavor flavor,
                             const ParamSetting& setting, const ProtocolOptions& options = {});

nlohmann::json SettingToJson(const ParamSetting& setting, GraphFlavor flavor);
nlohmann::json ReportToJson(const EvaluationReport& report);
// One row per (window, metric) followed by the time-averaged rows.
void WriteReportCsv(const EvaluationReport& report, std::ostream& out);

}  // namespace lsgrec
