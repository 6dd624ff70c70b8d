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

#include "lsgrec/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsgrec {

TransitionMatrix::TransitionMatrix(const RecGraph& graph) {
  if (graph.num_nodes() == 0) throw std::invalid_argument("graph has no nodes");
  offsets_.reserve(graph.num_nodes() + 1);
  offsets_.push_back(0);
  entries_.reserve(graph.num_edges());
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    const auto edges = graph.out_edges(v);
    double total = 0.0;
    for (const auto& e : edges) total += e.weight;
    if (total > 0.0) {
      for (const auto& e : edges) entries_.push_back({e.target, e.weight / total});
    } else {
      dangling_.push_back(v);
    }
    offsets_.push_back(entries_.size());
  }
}

double TransitionMatrix::entry(NodeIndex to, NodeIndex from) const {
  for (const auto& tr : column(from)) {
    if (tr.target == to) return tr.probability;
  }
  return 0.0;
}

PersonalizationVector Personalize(const RecGraph& graph, const std::string& user, Timestamp t,
                                  double beta) {
  const auto nodes = graph.user_nodes(user);
  if (nodes.empty()) throw UnknownUserError();
  PersonalizationVector d;
  switch (graph.flavor()) {
    case GraphFlavor::kBip:
      d.mass.emplace_back(nodes.front(), 1.0);
      break;
    case GraphFlavor::kStg: {
      if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
      // nodes = User(u), then Session(u, k) by increasing k.
      const NodeIndex user_node = nodes.front();
      if (nodes.size() < 2) throw std::logic_error("stg user without a session node");
      const NodeIndex latest = nodes.back();
      if (beta > 0.0) d.mass.emplace_back(user_node, beta);
      if (beta < 1.0) d.mass.emplace_back(latest, 1.0 - beta);
      break;
    }
    case GraphFlavor::kLsg: {
      const auto it = std::upper_bound(
          nodes.begin(), nodes.end(), t,
          [&](Timestamp value, NodeIndex v) { return value < graph.node(v).stamp; });
      if (it == nodes.begin()) {
        throw std::invalid_argument("user has no activity at or before the query time");
      }
      d.mass.emplace_back(*(it - 1), 1.0);
      break;
    }
  }
  return d;
}

ScoreVector PageRank(const TransitionMatrix& matrix, const PersonalizationVector& restart,
                     double alpha, const PageRankOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (restart.mass.empty()) throw std::invalid_argument("personalization has empty support");
  const std::size_t n = matrix.size();
  for (const auto& [v, m] : restart.mass) {
    if (v >= n) throw std::invalid_argument("personalization refers to an unknown node");
  }

  ScoreVector out;
  std::vector<double> current(n, 0.0);
  for (const auto& [v, m] : restart.mass) current[v] += m;
  std::vector<double> next(n);

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling_mass = 0.0;
    for (const NodeIndex v : matrix.dangling()) dangling_mass += current[v];
    for (NodeIndex src = 0; src < n; ++src) {
      const double flow = alpha * current[src];
      if (flow == 0.0) continue;
      for (const auto& tr : matrix.column(src)) next[tr.target] += flow * tr.probability;
    }
    const double restart_weight = alpha * dangling_mass + (1.0 - alpha);
    for (const auto& [v, m] : restart.mass) next[v] += restart_weight * m;

    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) change += std::abs(next[k] - current[k]);
    current.swap(next);
    out.iterations = iter;
    out.residual = change;
    if (change < options.tol) {
      out.converged = true;
      break;
    }
  }
  out.scores = std::move(current);
  return out;
}

std::vector<double> ItemScores(const RecGraph& graph, const ScoreVector& pr) {
  if (pr.scores.size() != graph.num_nodes()) {
    throw std::invalid_argument("score vector does not match the graph");
  }
  std::vector<double> scores;
  scores.reserve(graph.items().size());
  for (const auto& item : graph.items()) {
    double total = 0.0;
    for (const NodeIndex v : graph.item_nodes(item)) total += pr.scores[v];
    scores.push_back(total);
  }
  return scores;
}

std::map<std::string, double> ItemScoreMap(const RecGraph& graph, const ScoreVector& pr) {
  const auto scores = ItemScores(graph, pr);
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < scores.size(); ++k) out.emplace(graph.items()[k], scores[k]);
  return out;
}

namespace {

bool NearlyTied(double a, double b) {
  return std::abs(a - b) <= kScoreTieTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

RecommendationList TopN(std::span<const std::string> items, std::span<const double> scores,
                        const std::set<std::string>& exclude, int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (items.size() != scores.size()) throw std::invalid_argument("items and scores differ in size");
  std::vector<std::size_t> order;
  order.reserve(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!exclude.contains(items[k])) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return items[a] < items[b];
  });
  // Runs of nearly equal scores are re-ordered by id, so rounding noise in
  // the last bits cannot reorder what are ties in exact arithmetic.
  const auto limit = std::min(order.size(), static_cast<std::size_t>(n));
  std::size_t begin = 0;
  while (begin < limit) {
    std::size_t end = begin + 1;
    while (end < order.size() && NearlyTied(scores[order[end - 1]], scores[order[end]])) ++end;
    if (end - begin > 1) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                order.begin() + static_cast<std::ptrdiff_t>(end),
                [&](std::size_t a, std::size_t b) { return items[a] < items[b]; });
    }
    begin = end;
  }

  RecommendationList out;
  out.reserve(limit);
  for (std::size_t k = 0; k < limit; ++k) out.push_back({items[order[k]], scores[order[k]]});
  return out;
}

RecommendationList TopN(const std::map<std::string, double>& scores,
                        const std::set<std::string>& exclude, int n) {
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(scores.size());
  values.reserve(scores.size());
  for (const auto& [id, s] : scores) {
    ids.push_back(id);
    values.push_back(s);
  }
  return TopN(ids, values, exclude, n);
}

Recommender::Recommender(const RecGraph& graph, PageRankOptions options)
    : graph_(graph), matrix_(graph), options_(options) {}

Recommendation Recommender::Recommend(const std::string& user, Timestamp t,
                                      const ParamSetting& params,
                                      const std::set<std::string>& seen) const {
  const auto d = Personalize(graph_, user, t, params.beta.value_or(1.0));
  const auto pr = PageRank(matrix_, d, params.alpha, options_);
  const auto scores = ItemScores(graph_, pr);
  return {TopN(graph_.items(), scores, seen, params.n), pr.converged};
}

RecommendationList Recommend(const RecGraph& graph, const std::string& user, Timestamp t,
                             const ParamSetting& params, const std::set<std::string>& seen) {
  return Recommender(graph).Recommend(user, t, params, seen).items;
}

}  // namespace lsgrec
