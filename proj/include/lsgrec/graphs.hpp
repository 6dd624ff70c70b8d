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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsgrec/linkstream.hpp"

namespace lsgrec {

enum class GraphFlavor { kBip, kStg, kLsg };

const char* FlavorName(GraphFlavor flavor);
// Accepts "bip", "stg", "lsg" (case-insensitive).
std::optional<GraphFlavor> ParseFlavor(const std::string& name);

enum class NodeKind : std::uint8_t {
  kUser,
  kItem,
  kSession,
  kTemporalUser,
  kTemporalItem,
};

// User(u) | Item(i) | Session(u, k) | TemporalUser(t, u) | TemporalItem(t, i).
// `stamp` is the slice index for sessions and the time for temporal nodes.
struct NodeId {
  NodeKind kind = NodeKind::kUser;
  std::string key;
  Timestamp stamp = 0;

  static NodeId User(std::string u) { return {NodeKind::kUser, std::move(u), 0}; }
  static NodeId Item(std::string i) { return {NodeKind::kItem, std::move(i), 0}; }
  static NodeId Session(std::string u, Timestamp k) {
    return {NodeKind::kSession, std::move(u), k};
  }
  static NodeId TemporalUser(Timestamp t, std::string u) {
    return {NodeKind::kTemporalUser, std::move(u), t};
  }
  static NodeId TemporalItem(Timestamp t, std::string i) {
    return {NodeKind::kTemporalItem, std::move(i), t};
  }

  bool is_user_side() const {
    return kind == NodeKind::kUser || kind == NodeKind::kSession ||
           kind == NodeKind::kTemporalUser;
  }
  bool is_item_side() const {
    return kind == NodeKind::kItem || kind == NodeKind::kTemporalItem;
  }

  // U:u, I:i, S:u@k, TU:t@u, TI:t@i
  std::string ToString() const;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

using NodeIndex = std::uint32_t;

struct Edge {
  NodeIndex target = 0;
  double weight = 0.0;
};

struct GraphParams {
  // Slice origin (alpha of the source stream) and duration, STG only.
  Timestamp origin = 0;
  std::optional<Timestamp> delta;
  // Weight of edges pointing to the past, STG and LSG.
  std::optional<double> eta_s;
};

// Weighted directed graph with typed nodes. Nodes are indexed in NodeId
// order; out-edges of each node are sorted by target. Immutable once built.
class RecGraph {
 public:
  GraphFlavor flavor() const { return flavor_; }
  const GraphParams& params() const { return params_; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const NodeId& node(NodeIndex v) const { return nodes_[v]; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::optional<NodeIndex> find(const NodeId& id) const;

  std::span<const Edge> out_edges(NodeIndex v) const {
    return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
  }
  // 0 when the edge is absent.
  double weight(NodeIndex from, NodeIndex to) const;

  // Nodes standing for a user: User then Session nodes by slice (STG), or
  // TemporalUser nodes by time (LSG). Empty if the user is absent.
  std::span<const NodeIndex> user_nodes(const std::string& user) const;
  // Item or TemporalItem nodes by time.
  std::span<const NodeIndex> item_nodes(const std::string& item) const;

  // Sorted distinct ids.
  const std::vector<std::string>& users() const { return user_ids_; }
  const std::vector<std::string>& items() const { return item_ids_; }

  RecGraph WithScaledWeights(double factor) const;

  // One `src \t dst \t weight` line per edge, in node order.
  void WriteEdgeList(std::ostream& out) const;

 private:
  friend class GraphBuilder;

  GraphFlavor flavor_ = GraphFlavor::kBip;
  GraphParams params_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Edge> edges_;
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<std::vector<NodeIndex>> user_nodes_;
  std::vector<std::vector<NodeIndex>> item_nodes_;
};

// Accumulates nodes and directed edges, then freezes them into a RecGraph.
// Setting an edge twice keeps the last weight; zero weights store no edge.
class GraphBuilder {
 public:
  void AddNode(const NodeId& id);
  void SetEdge(const NodeId& from, const NodeId& to, double weight);

  RecGraph Build(GraphFlavor flavor, GraphParams params) &&;

 private:
  std::size_t Intern(const NodeId& id);

  std::map<NodeId, std::size_t> ids_;
  std::vector<NodeId> nodes_;
  std::map<std::pair<std::size_t, std::size_t>, double> edges_;
};

RecGraph BuildBip(const LinkStream& stream);
// `delta` is the slice duration in seconds; slices are half-open and
// anchored at stream.span().begin.
RecGraph BuildStg(const LinkStream& stream, Timestamp delta, double eta_s);
RecGraph BuildLsg(const LinkStream& stream, double eta_s);

// 1-based session slice of `t`.
Timestamp SliceOf(Timestamp t, Timestamp origin, Timestamp delta);

}  // namespace lsgrec
