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
#include <string>
#include <vector>

#include "lsgrec/evaluation.hpp"
#include "lsgrec/graphs.hpp"
#include "lsgrec/linkstream.hpp"
#include "lsgrec/params.hpp"

namespace lsgrec {

// Candidate values per parameter. Durations are in seconds.
struct ParamGrid {
  std::vector<Timestamp> deltas;
  std::vector<double> betas;
  std::vector<double> eta_s;
  std::vector<double> alphas;

  // Δ: 7..730 days, β: 0.1..0.9, η_s: 0..10, α: 0.05..0.9.
  static ParamGrid Defaults();

  // Throws std::invalid_argument on an empty list or out-of-range value
  // among the parameters `flavor` uses.
  void Validate(GraphFlavor flavor) const;
  // Size of the flavor-relevant cross-product.
  std::uint64_t CombinationCount(GraphFlavor flavor) const;
};

struct SampleResult {
  std::vector<ParamSetting> settings;
  // True when the cross-product had fewer than `count` combinations and was
  // returned whole.
  bool exhausted = false;
};

// Draws `count` distinct settings uniformly from the flavor's cross-product
// (BIP: α; STG: Δ, β, η_s, α; LSG: η_s, α). Deterministic in `seed`.
SampleResult SampleSettings(const ParamGrid& grid, GraphFlavor flavor, int count,
                            std::uint64_t seed, int n = 10);

enum class Objective { kF1, kHitRatio, kMap };

const char* ObjectiveName(Objective objective);
std::optional<Objective> ParseObjective(const std::string& name);
double ObjectiveValue(const TimeAveraged& metrics, Objective objective);

struct LeaderboardEntry {
  int sample_index = 0;
  ParamSetting setting;
  std::optional<TimeAveraged> metrics;
  std::string status = "ok";
};

struct Leaderboard {
  GraphFlavor flavor = GraphFlavor::kBip;
  Objective objective = Objective::kF1;
  // Successful runs, best first; ties keep sample order.
  std::vector<LeaderboardEntry> entries;
  // Runs that errored or evaluated nobody, in sample order.
  std::vector<LeaderboardEntry> failed;

  // Throws std::runtime_error when no setting succeeded.
  const LeaderboardEntry& best() const;
  // Best successful entry for another objective, same tie rule.
  const LeaderboardEntry& best(Objective objective) const;
};

// Splits results into entries and failures and orders the entries.
Leaderboard RankResults(std::vector<LeaderboardEntry> results, GraphFlavor flavor,
                        Objective objective);

struct SearchOptions {
  Objective objective = Objective::kF1;
  ProtocolOptions protocol;
  int n = 10;
  // Settings evaluated concurrently.
  int workers = 1;
};

struct SearchResult {
  Leaderboard leaderboard;
  bool exhausted = false;
  std::size_t sampled = 0;
};

SearchResult Search(const LinkStream& stream, GraphFlavor flavor, const ParamGrid& grid, int count,
                    std::uint64_t seed, const SearchOptions& options = {});

// Columns: sample_index, flavor, delta, beta, eta_s, alpha, n, TA_F1, TA_HR,
// TA_MAP, status. Delta is in days. Entries first, then failures.
void WriteLeaderboardCsv(const Leaderboard& board, std::ostream& out);

}  // namespace lsgrec
