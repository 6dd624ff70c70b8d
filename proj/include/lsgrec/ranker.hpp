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

#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lsgrec/graphs.hpp"
#include "lsgrec/params.hpp"

namespace lsgrec {

struct Transition {
  NodeIndex target = 0;
  double probability = 0.0;
};

// Column-stochastic transition matrix, stored by source column: column x
// holds the entries (y, x) = w(x, y) / sum_z w(x, z).
class TransitionMatrix {
 public:
  explicit TransitionMatrix(const RecGraph& graph);

  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const Transition> column(NodeIndex source) const {
    return {entries_.data() + offsets_[source], entries_.data() + offsets_[source + 1]};
  }
  // Nodes with zero out-weight, ascending.
  const std::vector<NodeIndex>& dangling() const { return dangling_; }
  double entry(NodeIndex to, NodeIndex from) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Transition> entries_;
  std::vector<NodeIndex> dangling_;
};

// Sparse restart distribution; masses sum to 1.
struct PersonalizationVector {
  std::vector<std::pair<NodeIndex, double>> mass;
};

class UnknownUserError : public std::invalid_argument {
 public:
  UnknownUserError() : std::invalid_argument("user not in training graph") {}
};

// BIP: all mass on User(u). STG: beta on User(u), 1 - beta on the session
// with the largest slice index. LSG: all mass on TemporalUser(t_k, u) for
// the largest t_k <= t. Throws UnknownUserError if u has no node.
PersonalizationVector Personalize(const RecGraph& graph, const std::string& user, Timestamp t,
                                  double beta);

struct PageRankOptions {
  double tol = 1e-10;
  int max_iter = 100;
};

struct ScoreVector {
  std::vector<double> scores;
  int iterations = 0;
  double residual = 0.0;  // L1 change of the last step
  bool converged = false;
};

// Power iteration of PR = alpha * M * PR + (1 - alpha) * d starting from
// PR = d. Mass on dangling nodes is sent back to d. Stops when the L1 change
// drops below tol; otherwise returns after max_iter with converged = false.
ScoreVector PageRank(const TransitionMatrix& matrix, const PersonalizationVector& restart,
                     double alpha, const PageRankOptions& options = {});

// Score per item, aligned with graph.items(). LSG sums over the item's
// temporal nodes.
std::vector<double> ItemScores(const RecGraph& graph, const ScoreVector& pr);
std::map<std::string, double> ItemScoreMap(const RecGraph& graph, const ScoreVector& pr);

struct ScoredItem {
  std::string item;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

using RecommendationList = std::vector<ScoredItem>;

// Scores closer than this (relative to the larger one) are ranked as a tie.
inline constexpr double kScoreTieTolerance = 1e-11;

// Best n items outside `exclude`, by descending score, ties by ascending id.
RecommendationList TopN(std::span<const std::string> items, std::span<const double> scores,
                        const std::set<std::string>& exclude, int n);
RecommendationList TopN(const std::map<std::string, double>& scores,
                        const std::set<std::string>& exclude, int n);

struct Recommendation {
  RecommendationList items;
  bool converged = true;
};

// Holds a graph and its transition matrix so that many users can be served
// from one build. The graph must outlive the recommender.
class Recommender {
 public:
  explicit Recommender(const RecGraph& graph, PageRankOptions options = {});

  const RecGraph& graph() const { return graph_; }
  const TransitionMatrix& matrix() const { return matrix_; }

  Recommendation Recommend(const std::string& user, Timestamp t, const ParamSetting& params,
                           const std::set<std::string>& seen) const;

 private:
  const RecGraph& graph_;
  TransitionMatrix matrix_;
  PageRankOptions options_;
};

RecommendationList Recommend(const RecGraph& graph, const std::string& user, Timestamp t,
                             const ParamSetting& params, const std::set<std::string>& seen);

}  // namespace lsgrec
