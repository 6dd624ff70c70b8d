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

#include "lsgrec/tuning.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "lsgrec/format.hpp"
#include "parallel.hpp"

namespace lsgrec {

ParamGrid ParamGrid::Defaults() {
  ParamGrid g;
  for (const Timestamp days : {7, 30, 60, 90, 180, 365, 540, 730}) {
    g.deltas.push_back(days * kSecondsPerDay);
  }
  g.betas = {0.1, 0.3, 0.5, 0.7, 0.9};
  g.eta_s = {0, 0.1, 0.2, 0.5, 1, 2, 5, 10};
  g.alphas = {0.05, 0.1, 0.15, 0.3, 0.5, 0.7, 0.9};
  return g;
}

void ParamGrid::Validate(GraphFlavor flavor) const {
  if (alphas.empty()) throw std::invalid_argument("alpha grid is empty");
  for (const double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha grid values must lie in (0, 1)");
  }
  if (flavor == GraphFlavor::kStg) {
    if (deltas.empty()) throw std::invalid_argument("delta grid is empty");
    if (betas.empty()) throw std::invalid_argument("beta grid is empty");
    for (const auto d : deltas) {
      if (d <= 0) throw std::invalid_argument("delta grid values must be positive");
    }
    for (const double b : betas) {
      if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("beta grid values must lie in [0, 1]");
    }
  }
  if (flavor != GraphFlavor::kBip) {
    if (eta_s.empty()) throw std::invalid_argument("eta_s grid is empty");
    for (const double e : eta_s) {
      if (!(e >= 0.0)) throw std::invalid_argument("eta_s grid values must be non-negative");
    }
  }
}

std::uint64_t ParamGrid::CombinationCount(GraphFlavor flavor) const {
  std::uint64_t total = alphas.size();
  if (flavor == GraphFlavor::kStg) total *= deltas.size() * betas.size();
  if (flavor != GraphFlavor::kBip) total *= eta_s.size();
  return total;
}

namespace {

// Decodes a mixed-radix index; α varies fastest.
ParamSetting Decode(const ParamGrid& grid, GraphFlavor flavor, std::uint64_t index, int n) {
  ParamSetting s;
  s.n = n;
  s.alpha = grid.alphas[index % grid.alphas.size()];
  index /= grid.alphas.size();
  if (flavor != GraphFlavor::kBip) {
    s.eta_s = grid.eta_s[index % grid.eta_s.size()];
    index /= grid.eta_s.size();
  }
  if (flavor == GraphFlavor::kStg) {
    s.beta = grid.betas[index % grid.betas.size()];
    index /= grid.betas.size();
    s.delta = grid.deltas[index % grid.deltas.size()];
  }
  return s;
}

}  // namespace

SampleResult SampleSettings(const ParamGrid& grid, GraphFlavor flavor, int count,
                            std::uint64_t seed, int n) {
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  grid.Validate(flavor);
  const std::uint64_t total = grid.CombinationCount(flavor);
  SampleResult out;
  if (total <= static_cast<std::uint64_t>(count)) {
    out.exhausted = total < static_cast<std::uint64_t>(count);
    for (std::uint64_t k = 0; k < total; ++k) out.settings.push_back(Decode(grid, flavor, k, n));
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  std::set<std::uint64_t> drawn;
  while (out.settings.size() < static_cast<std::size_t>(count)) {
    const auto index = pick(rng);
    if (!drawn.insert(index).second) continue;
    out.settings.push_back(Decode(grid, flavor, index, n));
  }
  return out;
}

const char* ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kF1:
      return "f1";
    case Objective::kHitRatio:
      return "hr";
    case Objective::kMap:
      return "map";
  }
  return "?";
}

std::optional<Objective> ParseObjective(const std::string& name) {
  if (name == "f1" || name == "F1") return Objective::kF1;
  if (name == "hr" || name == "HR") return Objective::kHitRatio;
  if (name == "map" || name == "MAP") return Objective::kMap;
  return std::nullopt;
}

double ObjectiveValue(const TimeAveraged& metrics, Objective objective) {
  switch (objective) {
    case Objective::kF1:
      return metrics.f1;
    case Objective::kHitRatio:
      return metrics.hr;
    case Objective::kMap:
      return metrics.map;
  }
  return 0.0;
}

namespace {

void SortEntries(std::vector<LeaderboardEntry>& entries, Objective objective) {
  std::stable_sort(entries.begin(), entries.end(),
                   [&](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                     const double va = ObjectiveValue(*a.metrics, objective);
                     const double vb = ObjectiveValue(*b.metrics, objective);
                     if (va != vb) return va > vb;
                     return a.sample_index < b.sample_index;
                   });
}

}  // namespace

const LeaderboardEntry& Leaderboard::best() const {
  if (entries.empty()) throw std::runtime_error("no setting was evaluated successfully");
  return entries.front();
}

const LeaderboardEntry& Leaderboard::best(Objective other) const {
  if (entries.empty()) throw std::runtime_error("no setting was evaluated successfully");
  const LeaderboardEntry* top = &entries.front();
  for (const auto& e : entries) {
    const double v = ObjectiveValue(*e.metrics, other);
    const double vt = ObjectiveValue(*top->metrics, other);
    if (v > vt || (v == vt && e.sample_index < top->sample_index)) top = &e;
  }
  return *top;
}

Leaderboard RankResults(std::vector<LeaderboardEntry> results, GraphFlavor flavor,
                        Objective objective) {
  Leaderboard board;
  board.flavor = flavor;
  board.objective = objective;
  for (auto& r : results) {
    (r.metrics && r.status == "ok" ? board.entries : board.failed).push_back(std::move(r));
  }
  SortEntries(board.entries, objective);
  std::sort(board.failed.begin(), board.failed.end(),
            [](const auto& a, const auto& b) { return a.sample_index < b.sample_index; });
  return board;
}

SearchResult Search(const LinkStream& stream, GraphFlavor flavor, const ParamGrid& grid, int count,
                    std::uint64_t seed, const SearchOptions& options) {
  const auto sample = SampleSettings(grid, flavor, count, seed, options.n);
  std::vector<LeaderboardEntry> results(sample.settings.size());
  ProtocolOptions protocol = options.protocol;
  if (options.workers > 1) protocol.workers = 1;

  detail::ParallelFor(sample.settings.size(), options.workers, [&](std::size_t k) {
    auto& entry = results[k];
    entry.sample_index = static_cast<int>(k);
    entry.setting = sample.settings[k];
    try {
      const auto report = RunProtocol(stream, flavor, entry.setting, protocol);
      if (report.averaged) {
        entry.metrics = report.averaged;
      } else {
        entry.status = "nothing_evaluated";
      }
    } catch (const std::exception& e) {
      entry.status = std::string("error: ") + e.what();
    }
  });

  SearchResult out;
  out.sampled = results.size();
  out.exhausted = sample.exhausted;
  out.leaderboard = RankResults(std::move(results), flavor, options.objective);
  return out;
}

namespace {

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

void WriteRow(const LeaderboardEntry& e, GraphFlavor flavor, std::ostream& out) {
  out << e.sample_index << ',' << FlavorName(flavor) << ',';
  if (e.setting.delta) {
    out << FormatReal(static_cast<double>(*e.setting.delta) / kSecondsPerDay);
  }
  out << ',';
  if (e.setting.beta) out << FormatReal(*e.setting.beta);
  out << ',';
  if (e.setting.eta_s) out << FormatReal(*e.setting.eta_s);
  out << ',' << FormatReal(e.setting.alpha) << ',' << e.setting.n << ',';
  if (e.metrics) {
    out << FormatReal(e.metrics->f1) << ',' << FormatReal(e.metrics->hr) << ','
        << FormatReal(e.metrics->map);
  } else {
    out << ",,";
  }
  out << ',' << CsvField(e.status) << '\n';
}

}  // namespace

void WriteLeaderboardCsv(const Leaderboard& board, std::ostream& out) {
  out << "sample_index,flavor,delta,beta,eta_s,alpha,n,TA_F1,TA_HR,TA_MAP,status\n";
  for (const auto& e : board.entries) WriteRow(e, board.flavor, out);
  for (const auto& e : board.failed) WriteRow(e, board.flavor, out);
}

}  // namespace lsgrec
