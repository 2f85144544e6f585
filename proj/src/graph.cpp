/*
 * Copyright (C) 2026 The logpath Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "logpath/graph.hpp"

#include <algorithm>

#include "logpath/errors.hpp"

namespace logpath {

const std::vector<size_t> Supergraph::kNoEdges{};
const std::vector<size_t> GraphOverlay::kNoEdges{};

const char* edge_kind_name(EdgeKind k)
{
    switch (k) {
    case EdgeKind::Flow:
        return "flow";
    case EdgeKind::CallEnter:
        return "call";
    case EdgeKind::Return:
        return "return";
    }
    return "?";
}

const char* stmt_kind_name(StmtKind k)
{
    switch (k) {
    case StmtKind::Plain:
        return "plain";
    case StmtKind::Branch:
        return "branch";
    case StmtKind::Call:
        return "call";
    case StmtKind::Entry:
        return "entry";
    case StmtKind::Exit:
        return "exit";
    }
    return "?";
}

Supergraph::Supergraph(MethodId root, std::vector<Node> nodes,
                       std::vector<Edge> edges)
    : root_(std::move(root)), nodes_(std::move(nodes)),
      edges_(std::move(edges))
{
    node_index_.reserve(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        node_index_.emplace(n.id, i);
        partition_[n.method.signature].push_back(n.id);
        if (n.statement.kind == StmtKind::Entry) {
            // Duplicate entries are reported by validate(); the first wins
            // for lookup purposes.
            entries_.emplace(n.method.signature, n.id);
        }
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
        adjacency_[edges_[i].from].push_back(i);
    }
}

const Node* Supergraph::find_node(NodeId id) const
{
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const std::vector<size_t>& Supergraph::out_edges(NodeId id) const
{
    auto it = adjacency_.find(id);
    return it == adjacency_.end() ? kNoEdges : it->second;
}

std::optional<NodeId> Supergraph::entry_of(const ApiSignature& method) const
{
    auto it = entries_.find(method);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void AppModel::rebuild_indices()
{
    callback_set =
        std::set<ApiSignature>(callback_registry.begin(),
                               callback_registry.end());
    logged_api_set =
        std::set<ApiSignature>(logged_apis.begin(), logged_apis.end());
    by_root_.clear();
    max_node_id = 0;
    for (size_t i = 0; i < supergraphs.size(); ++i) {
        by_root_.emplace(supergraphs[i].root_callback().signature.canonical(),
                         i);
        for (const Node& n : supergraphs[i].nodes()) {
            max_node_id = std::max(max_node_id, n.id);
        }
    }
}

const Supergraph* AppModel::supergraph_for(const ApiSignature& callback) const
{
    auto it = by_root_.find(callback.canonical());
    return it == by_root_.end() ? nullptr : &supergraphs[it->second];
}

std::optional<size_t> AppModel::cfg_home(const ApiSignature& method) const
{
    for (size_t i = 0; i < supergraphs.size(); ++i) {
        if (supergraphs[i].method_partition().count(method) > 0) {
            return i;
        }
    }
    return std::nullopt;
}

GraphOverlay::GraphOverlay(const Supergraph& base, const AppModel& model)
    : base_(&base), model_(&model), next_id_(model.max_node_id + 1)
{
}

bool GraphOverlay::has_node(NodeId id) const
{
    return find_node(id) != nullptr;
}

const Node* GraphOverlay::find_node(NodeId id) const
{
    if (const Node* n = base_->find_node(id)) {
        return n;
    }
    auto it = added_index_.find(id);
    return it == added_index_.end() ? nullptr : &added_nodes_[it->second];
}

NodeId GraphOverlay::add_node(Node n)
{
    if (has_node(n.id)) {
        throw ContractError("overlay: node id " + std::to_string(n.id) +
                            " already exists");
    }
    const NodeId id = n.id;
    added_index_.emplace(id, added_nodes_.size());
    added_nodes_.push_back(std::move(n));
    return id;
}

void GraphOverlay::add_edge(Edge e)
{
    if (!has_node(e.from) || !has_node(e.to)) {
        throw ContractError("overlay: edge endpoint unknown (" +
                            std::to_string(e.from) + " -> " +
                            std::to_string(e.to) + ")");
    }
    added_adjacency_[e.from].push_back(added_edges_.size());
    added_edges_.push_back(e);
}

void GraphOverlay::remove_base_edge(size_t edge_index)
{
    if (edge_index >= base_->edges().size()) {
        throw ContractError("overlay: base edge index out of range");
    }
    removed_.insert(edge_index);
}

void GraphOverlay::unremove_base_edge(size_t edge_index)
{
    removed_.erase(edge_index);
}

std::optional<NodeId> GraphOverlay::memo_lookup(NodeId site,
                                                const std::string& target)
    const
{
    auto it = memo_.find({site, target});
    if (it == memo_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void GraphOverlay::memo_store(NodeId site, const std::string& target,
                              NodeId root)
{
    memo_.emplace(std::make_pair(site, target), root);
}

const std::vector<size_t>& GraphOverlay::overlay_out_edges(NodeId id) const
{
    auto it = added_adjacency_.find(id);
    return it == added_adjacency_.end() ? kNoEdges : it->second;
}

std::vector<Successor> successors(const GraphOverlay& overlay, NodeId n)
{
    if (!overlay.has_node(n)) {
        throw ContractError("successors: unknown node " + std::to_string(n));
    }
    std::vector<Successor> out;
    const Supergraph& base = overlay.base();
    for (size_t ei : base.out_edges(n)) {
        if (overlay.removed_edges().count(ei) > 0) {
            continue;
        }
        const Edge& e = base.edges()[ei];
        out.push_back({e.to, e.kind, false});
    }
    for (size_t ei : overlay.overlay_out_edges(n)) {
        const Edge& e = overlay.added_edges()[ei];
        out.push_back({e.to, e.kind, true});
    }
    return out;
}

std::vector<Successor> successors(const Supergraph& g, NodeId n)
{
    if (!g.contains(n)) {
        throw ContractError("successors: unknown node " + std::to_string(n));
    }
    std::vector<Successor> out;
    for (size_t ei : g.out_edges(n)) {
        const Edge& e = g.edges()[ei];
        out.push_back({e.to, e.kind, false});
    }
    return out;
}

std::vector<NodeId> neighbors(const GraphOverlay& overlay, NodeId n)
{
    std::vector<NodeId> ids;
    for (const Successor& s : successors(overlay, n)) {
        ids.push_back(s.to);
    }
    return ids;
}

std::optional<NodeId> unique_flow_successor(const GraphOverlay& overlay,
                                            NodeId n)
{
    std::optional<NodeId> found;
    for (const Successor& s : successors(overlay, n)) {
        if (s.kind != EdgeKind::Flow) {
            continue;
        }
        if (found) {
            return std::nullopt;
        }
        found = s.to;
    }
    return found;
}

} // namespace logpath
