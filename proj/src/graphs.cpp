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

#include "lsgrec/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace lsgrec {

const char* FlavorName(GraphFlavor flavor) {
  switch (flavor) {
    case GraphFlavor::kBip:
      return "bip";
    case GraphFlavor::kStg:
      return "stg";
    case GraphFlavor::kLsg:
      return "lsg";
  }
  return "?";
}

std::optional<GraphFlavor> ParseFlavor(const std::string& name) {
  std::string lower = name;
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "bip") return GraphFlavor::kBip;
  if (lower == "stg") return GraphFlavor::kStg;
  if (lower == "lsg") return GraphFlavor::kLsg;
  return std::nullopt;
}

std::string NodeId::ToString() const {
  switch (kind) {
    case NodeKind::kUser:
      return "U:" + key;
    case NodeKind::kItem:
      return "I:" + key;
    case NodeKind::kSession:
      return "S:" + key + "@" + std::to_string(stamp);
    case NodeKind::kTemporalUser:
      return "TU:" + std::to_string(stamp) + "@" + key;
    case NodeKind::kTemporalItem:
      return "TI:" + std::to_string(stamp) + "@" + key;
  }
  return "?";
}

std::optional<NodeIndex> RecGraph::find(const NodeId& id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

double RecGraph::weight(NodeIndex from, NodeIndex to) const {
  const auto edges = out_edges(from);
  const auto it = std::lower_bound(edges.begin(), edges.end(), to,
                                   [](const Edge& e, NodeIndex v) { return e.target < v; });
  return it != edges.end() && it->target == to ? it->weight : 0.0;
}

namespace {

std::span<const NodeIndex> Lookup(const std::vector<std::string>& ids,
                                  const std::vector<std::vector<NodeIndex>>& groups,
                                  const std::string& key) {
  const auto it = std::lower_bound(ids.begin(), ids.end(), key);
  if (it == ids.end() || *it != key) return {};
  return groups[static_cast<std::size_t>(it - ids.begin())];
}

}  // namespace

std::span<const NodeIndex> RecGraph::user_nodes(const std::string& user) const {
  return Lookup(user_ids_, user_nodes_, user);
}

std::span<const NodeIndex> RecGraph::item_nodes(const std::string& item) const {
  return Lookup(item_ids_, item_nodes_, item);
}

RecGraph RecGraph::WithScaledWeights(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  RecGraph copy = *this;
  for (auto& e : copy.edges_) e.weight *= factor;
  return copy;
}

void RecGraph::WriteEdgeList(std::ostream& out) const {
  char buf[64];
  for (NodeIndex v = 0; v < num_nodes(); ++v) {
    for (const auto& e : out_edges(v)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), e.weight);
      out << nodes_[v].ToString() << '\t' << nodes_[e.target].ToString() << '\t'
          << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
  }
}

std::size_t GraphBuilder::Intern(const NodeId& id) {
  const auto [it, inserted] = ids_.try_emplace(id, nodes_.size());
  if (inserted) nodes_.push_back(id);
  return it->second;
}

void GraphBuilder::AddNode(const NodeId& id) { Intern(id); }

void GraphBuilder::SetEdge(const NodeId& from, const NodeId& to, double weight) {
  if (weight < 0.0) throw std::invalid_argument("edge weights must be non-negative");
  if (from == to) throw std::invalid_argument("self-loops are not allowed");
  const auto a = Intern(from);
  const auto b = Intern(to);
  if (weight == 0.0) {
    edges_.erase({a, b});
    return;
  }
  edges_[{a, b}] = weight;
}

RecGraph GraphBuilder::Build(GraphFlavor flavor, GraphParams params) && {
  RecGraph g;
  g.flavor_ = flavor;
  g.params_ = params;

  // ids_ iterates in NodeId order, which becomes the node index order.
  std::vector<NodeIndex> remap(nodes_.size());
  g.nodes_.reserve(nodes_.size());
  for (const auto& [id, provisional] : ids_) {
    remap[provisional] = static_cast<NodeIndex>(g.nodes_.size());
    g.nodes_.push_back(id);
  }

  std::vector<std::vector<Edge>> adjacency(g.nodes_.size());
  for (const auto& [key, w] : edges_) {
    adjacency[remap[key.first]].push_back({remap[key.second], w});
  }
  g.offsets_.assign(1, 0);
  g.edges_.reserve(edges_.size());
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end(),
              [](const Edge& a, const Edge& b) { return a.target < b.target; });
    g.edges_.insert(g.edges_.end(), list.begin(), list.end());
    g.offsets_.push_back(g.edges_.size());
  }

  std::map<std::string, std::vector<NodeIndex>> users;
  std::map<std::string, std::vector<NodeIndex>> items;
  for (NodeIndex v = 0; v < g.nodes_.size(); ++v) {
    const auto& id = g.nodes_[v];
    if (id.is_user_side()) users[id.key].push_back(v);
    if (id.is_item_side()) items[id.key].push_back(v);
  }
  for (auto& [key, list] : users) {
    g.user_ids_.push_back(key);
    g.user_nodes_.push_back(std::move(list));
  }
  for (auto& [key, list] : items) {
    g.item_ids_.push_back(key);
    g.item_nodes_.push_back(std::move(list));
  }
  nodes_.clear();
  ids_.clear();
  edges_.clear();
  return g;
}

namespace {

void RequireEvents(const LinkStream& stream) {
  if (stream.empty()) throw std::invalid_argument("cannot build graph from empty stream");
}

void RequireEta(double eta_s) {
  if (!(eta_s >= 0.0)) throw std::invalid_argument("eta_s must be non-negative");
}

void AddBipartiteEdges(GraphBuilder& b, const LinkStream& stream) {
  for (const auto& e : stream.events()) {
    const auto u = NodeId::User(e.user);
    const auto i = NodeId::Item(e.item);
    b.SetEdge(u, i, 1.0);
    b.SetEdge(i, u, 1.0);
  }
}

}  // namespace

Timestamp SliceOf(Timestamp t, Timestamp origin, Timestamp delta) {
  const Timestamp offset = t - origin;
  Timestamp k = offset / delta;
  if (offset % delta != 0 && offset < 0) --k;
  return k + 1;
}

RecGraph BuildBip(const LinkStream& stream) {
  RequireEvents(stream);
  GraphBuilder b;
  AddBipartiteEdges(b, stream);
  return std::move(b).Build(GraphFlavor::kBip, {stream.span().begin, std::nullopt, std::nullopt});
}

RecGraph BuildStg(const LinkStream& stream, Timestamp delta, double eta_s) {
  RequireEvents(stream);
  RequireEta(eta_s);
  if (delta <= 0) throw std::invalid_argument("session duration must be positive");
  GraphBuilder b;
  AddBipartiteEdges(b, stream);
  const Timestamp origin = stream.span().begin;
  for (const auto& e : stream.events()) {
    const auto s = NodeId::Session(e.user, SliceOf(e.t, origin, delta));
    const auto i = NodeId::Item(e.item);
    b.SetEdge(s, i, 1.0);
    if (eta_s > 0.0) b.SetEdge(i, s, eta_s);
  }
  return std::move(b).Build(GraphFlavor::kStg, {origin, delta, eta_s});
}

RecGraph BuildLsg(const LinkStream& stream, double eta_s) {
  RequireEvents(stream);
  RequireEta(eta_s);
  GraphBuilder b;
  std::map<std::string, std::vector<Timestamp>> user_times;
  std::map<std::string, std::vector<Timestamp>> item_times;
  for (const auto& e : stream.events()) {
    b.SetEdge(NodeId::TemporalUser(e.t, e.user), NodeId::TemporalItem(e.t, e.item), 1.0);
    b.SetEdge(NodeId::TemporalItem(e.t, e.item), NodeId::TemporalUser(e.t, e.user), 1.0);
    user_times[e.user].push_back(e.t);
    item_times[e.item].push_back(e.t);
  }

  const auto chain = [&](auto& times, auto make) {
    for (auto& [key, ts] : times) {
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const auto earlier = make(ts[k], key);
        const auto later = make(ts[k + 1], key);
        b.SetEdge(earlier, later, 1.0);
        if (eta_s > 0.0) b.SetEdge(later, earlier, eta_s);
      }
    }
  };
  chain(user_times, [](Timestamp t, const std::string& u) { return NodeId::TemporalUser(t, u); });
  chain(item_times, [](Timestamp t, const std::string& i) { return NodeId::TemporalItem(t, i); });

  return std::move(b).Build(GraphFlavor::kLsg, {stream.span().begin, std::nullopt, eta_s});
}

}  // namespace lsgrec
