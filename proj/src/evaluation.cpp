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

#include "lsgrec/evaluation.hpp"

#include <algorithm>
#include <utility>

#include "lsgrec/format.hpp"
#include "parallel.hpp"

namespace lsgrec {

HitProfile HitsAtN(const RecommendationList& recommended, const std::set<std::string>& relevant) {
  HitProfile p;
  p.flags.reserve(recommended.size());
  p.prefix.reserve(recommended.size());
  int running = 0;
  for (const auto& r : recommended) {
    const int h = relevant.contains(r.item) ? 1 : 0;
    running += h;
    p.flags.push_back(h);
    p.prefix.push_back(running);
  }
  return p;
}

Ratio F1Components(std::span<const int> hits, std::span<const std::size_t> relevant_sizes,
                   int n) {
  if (hits.size() != relevant_sizes.size()) {
    throw std::invalid_argument("hit and relevant-set counts differ");
  }
  Ratio r;
  for (std::size_t u = 0; u < hits.size(); ++u) {
    r.numerator += 2.0 * hits[u];
    r.denominator += static_cast<double>(relevant_sizes[u]) + n;
  }
  return r;
}

Ratio HitRatioComponents(std::span<const int> hits) {
  Ratio r;
  for (const int h : hits) r.numerator += h > 0 ? 1.0 : 0.0;
  r.denominator = static_cast<double>(hits.size());
  return r;
}

double AveragePrecision(const HitProfile& profile, int n) {
  const int hits = profile.hits();
  if (hits == 0) return 0.0;
  const auto ranks = std::min(profile.flags.size(), static_cast<std::size_t>(n));
  double sum = 0.0;
  for (std::size_t k = 0; k < ranks; ++k) {
    if (profile.flags[k]) sum += static_cast<double>(profile.prefix[k]) / static_cast<double>(k + 1);
  }
  return sum / hits;
}

Ratio MapComponents(std::span<const HitProfile> profiles, int n) {
  Ratio r;
  for (const auto& p : profiles) r.numerator += AveragePrecision(p, n);
  r.denominator = static_cast<double>(profiles.size());
  return r;
}

TimeAveraged TimeAverage(std::span<const MetricComponents> windows) {
  Ratio f1;
  Ratio hr;
  Ratio map;
  for (const auto& w : windows) {
    f1 += w.f1;
    hr += w.hr;
    map += w.map;
  }
  if (f1.denominator <= 0.0 && hr.denominator <= 0.0 && map.denominator <= 0.0) {
    throw NothingEvaluatedError();
  }
  return {f1.value(), hr.value(), map.value()};
}

std::vector<Fold> MakeFolds(const LinkStream& stream, int n_windows) {
  const auto slices = SplitWindows(stream, n_windows);
  std::vector<Fold> folds;
  std::vector<Event> train_events;
  for (int k = 1; k < n_windows; ++k) {
    const auto& last_train = slices[static_cast<std::size_t>(k - 1)];
    const auto& test_slice = slices[static_cast<std::size_t>(k)];
    train_events.insert(train_events.end(), last_train.stream.events().begin(),
                        last_train.stream.events().end());

    Fold fold;
    fold.k = k;
    const TimeSpan train_span{stream.span().begin,
                              std::max(stream.span().begin, last_train.stream.span().end)};
    fold.train = LinkStream(train_events, train_span);
    fold.test = test_slice.stream;
    fold.recommendation_time = train_span.end;

    std::map<std::string, std::set<std::string>> history;
    for (const auto& e : fold.train.events()) history[e.user].insert(e.item);
    for (const auto& e : fold.test.events()) {
      const auto it = history.find(e.user);
      if (it == history.end() || it->second.contains(e.item)) continue;
      fold.truth[e.user].insert(e.item);
    }
    for (const auto& [user, items] : fold.truth) fold.seen[user] = history.at(user);
    folds.push_back(std::move(fold));
  }
  return folds;
}

namespace {

struct UserOutcome {
  HitProfile profile;
  std::size_t relevant = 0;
  bool converged = true;
};

MetricComponents EvaluateFold(const Fold& fold, GraphFlavor flavor, const ParamSetting& setting,
                              const ProtocolOptions& options) {
  MetricComponents c;
  c.window = fold.k;
  c.recommendation_time = fold.recommendation_time;
  if (fold.truth.empty()) {
    c.skipped = true;
    return c;
  }

  const RecGraph graph = BuildGraph(fold.train, flavor, setting);
  const Recommender recommender(graph, options.pagerank);

  std::vector<const std::string*> users;
  for (const auto& [user, items] : fold.truth) users.push_back(&user);
  std::vector<UserOutcome> outcomes(users.size());
  detail::ParallelFor(users.size(), options.workers, [&](std::size_t k) {
    const auto& user = *users[k];
    const auto& relevant = fold.truth.at(user);
    auto rec = recommender.Recommend(user, fold.recommendation_time, setting, fold.seen.at(user));
    outcomes[k] = {HitsAtN(rec.items, relevant), relevant.size(), rec.converged};
  });

  std::vector<int> hits;
  std::vector<std::size_t> sizes;
  std::vector<HitProfile> profiles;
  for (auto& o : outcomes) {
    hits.push_back(o.profile.hits());
    sizes.push_back(o.relevant);
    if (!o.converged) ++c.nonconverged;
    profiles.push_back(std::move(o.profile));
  }
  c.users = users.size();
  c.f1 = F1Components(hits, sizes, setting.n);
  c.hr = HitRatioComponents(hits);
  c.map = MapComponents(profiles, setting.n);
  return c;
}

nlohmann::json RatioToJson(const Ratio& r) {
  return {{"numerator", r.numerator}, {"denominator", r.denominator}, {"value", r.value()}};
}

}  // namespace

EvaluationReport RunProtocol(const LinkStream& stream, GraphFlavor flavor,
                             const ParamSetting& setting, const ProtocolOptions& options) {
  ValidateSetting(setting, flavor);
  EvaluationReport report;
  report.flavor = flavor;
  report.setting = setting;
  report.options = options;
  for (const auto& fold : MakeFolds(stream, options.n_windows)) {
    report.windows.push_back(EvaluateFold(fold, flavor, setting, options));
  }
  try {
    report.averaged = TimeAverage(report.windows);
  } catch (const NothingEvaluatedError&) {
    report.averaged.reset();
  }
  return report;
}

nlohmann::json SettingToJson(const ParamSetting& setting, GraphFlavor flavor) {
  nlohmann::json j;
  j["alpha"] = setting.alpha;
  j["n"] = setting.n;
  j["delta_seconds"] = nullptr;
  j["beta"] = nullptr;
  j["eta_s"] = nullptr;
  if (flavor == GraphFlavor::kStg) {
    if (setting.delta) j["delta_seconds"] = *setting.delta;
    if (setting.beta) j["beta"] = *setting.beta;
  }
  if (flavor != GraphFlavor::kBip && setting.eta_s) j["eta_s"] = *setting.eta_s;
  return j;
}

nlohmann::json ReportToJson(const EvaluationReport& report) {
  nlohmann::json j;
  j["flavor"] = FlavorName(report.flavor);
  j["setting"] = SettingToJson(report.setting, report.flavor);
  j["protocol"] = {
      {"windows", report.options.n_windows},
      {"tol", report.options.pagerank.tol},
      {"max_iter", report.options.pagerank.max_iter},
      {"evaluated_users", "present in training with at least one new test item"},
  };
  auto windows = nlohmann::json::array();
  for (const auto& w : report.windows) {
    windows.push_back({
        {"window", w.window},
        {"skipped", w.skipped},
        {"users", w.users},
        {"nonconverged", w.nonconverged},
        {"recommendation_time", w.recommendation_time},
        {"f1", RatioToJson(w.f1)},
        {"hr", RatioToJson(w.hr)},
        {"map", RatioToJson(w.map)},
    });
  }
  j["windows"] = std::move(windows);
  if (report.averaged) {
    j["status"] = "ok";
    j["time_averaged"] = {
        {"f1", report.averaged->f1}, {"hr", report.averaged->hr}, {"map", report.averaged->map}};
  } else {
    j["status"] = "nothing_evaluated";
    j["time_averaged"] = nullptr;
  }
  return j;
}

void WriteReportCsv(const EvaluationReport& report, std::ostream& out) {
  out << "window,metric,numerator,denominator,value,users,skipped\n";
  Ratio totals[3];
  std::size_t users = 0;
  for (const auto& w : report.windows) {
    const std::pair<const char*, const Ratio*> rows[] = {{"f1", &w.f1}, {"hr", &w.hr}, {"map", &w.map}};
    for (std::size_t m = 0; m < 3; ++m) {
      const auto& r = *rows[m].second;
      totals[m] += r;
      out << w.window << ',' << rows[m].first << ',' << FormatReal(r.numerator) << ','
          << FormatReal(r.denominator) << ',' << FormatReal(r.value()) << ',' << w.users << ','
          << (w.skipped ? 1 : 0) << '\n';
    }
    users += w.users;
  }
  const char* names[] = {"f1", "hr", "map"};
  for (std::size_t m = 0; m < 3; ++m) {
    out << "TA," << names[m] << ',' << FormatReal(totals[m].numerator) << ','
        << FormatReal(totals[m].denominator) << ',' << FormatReal(totals[m].value()) << ','
        << users << ',' << (report.averaged ? 0 : 1) << '\n';
  }
}

}  // namespace lsgrec
