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

#ifndef LOGPATH_GRAPH_HPP
#define LOGPATH_GRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logpath/signature.hpp"

namespace logpath {

using NodeId = int64_t;

enum class StmtKind : uint8_t { Plain, Branch, Call, Entry, Exit };

/// How a call statement's target is resolved.
///  - Static:     an app-defined method with a CFG in the model.
///  - Framework:  a platform API; no CFG exists for it.
///  - Reflective: target named by runtime arguments, supplied at match
///                time from the log.
///  - Icc:        platform-mediated component-to-component call; the
///                receiver is supplied at match time from the log.
enum class CalleeKind : uint8_t { Static, Framework, Reflective, Icc };

struct CalleeRef {
    CalleeKind kind = CalleeKind::Framework;
    /// Set for Static and Framework; Reflective/Icc carry no target.
    std::optional<ApiSignature> target;
};

struct Statement {
    StmtKind kind = StmtKind::Plain;
    /// Human-readable text. For Branch nodes this is the verbatim
    /// condition text; it is never evaluated.
    std::string display;
    std::optional<CalleeRef> callee; // present iff kind == Call
};

struct Node {
    NodeId id = 0;
    MethodId method; // owning method; always AppDefined
    Statement statement;
};

enum class EdgeKind : uint8_t { Flow, CallEnter, Return };

struct Edge {
    NodeId from = 0;
    NodeId to = 0;
    EdgeKind kind = EdgeKind::Flow;

    bool operator==(const Edge& o) const
    {
        return from == o.from && to == o.to && kind == o.kind;
    }
};

const char* edge_kind_name(EdgeKind k);
const char* stmt_kind_name(StmtKind k);

/// The union of per-method CFGs reachable from one callback, connected by
/// CallEnter/Return edges. Immutable after load; edge declaration order
/// defines neighbor visitation order.
class Supergraph {
public:
    Supergraph() = default;
    Supergraph(MethodId root, std::vector<Node> nodes,
               std::vector<Edge> edges);

    const MethodId& root_callback() const { return root_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Node* find_node(NodeId id) const;
    bool contains(NodeId id) const { return find_node(id) != nullptr; }

    /// Indices into edges() with .from == id, in declaration order.
    const std::vector<size_t>& out_edges(NodeId id) const;

    /// Node ids per owning method signature, in node declaration order.
    const std::map<ApiSignature, std::vector<NodeId>>& method_partition()
        const
    {
        return partition_;
    }

    /// The Entry node of a method's CFG, or nullopt if the method has no
    /// (single) Entry here.
    std::optional<NodeId> entry_of(const ApiSignature& method) const;

    /// The Entry node of the root callback's CFG.
    std::optional<NodeId> root_entry() const
    {
        return entry_of(root_.signature);
    }

private:
    MethodId root_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;

    std::unordered_map<NodeId, size_t> node_index_;
    std::unordered_map<NodeId, std::vector<size_t>> adjacency_;
    std::map<ApiSignature, std::vector<NodeId>> partition_;
    std::map<ApiSignature, NodeId> entries_;

    static const std::vector<size_t> kNoEdges;
};

/// The full static model: per-callback supergraphs plus the registries
/// the log pipeline needs. Immutable after load.
struct AppModel {
    std::vector<Supergraph> supergraphs; // file order
    std::vector<ApiSignature> callback_registry; // file order
    std::vector<ApiSignature> logged_apis;       // file order
    std::vector<std::string> library_prefixes;   // ordered

    std::set<ApiSignature> callback_set;
    std::set<ApiSignature> logged_api_set;

    NodeId max_node_id = 0;

    void rebuild_indices();

    const Supergraph* supergraph_for(const ApiSignature& callback) const;
    bool is_callback(const ApiSignature& sig) const
    {
        return callback_set.count(sig) > 0;
    }
    bool is_logged_api(const ApiSignature& sig) const
    {
        return logged_api_set.count(sig) > 0;
    }

    /// The supergraph (by index) holding a CFG for `method`, searching in
    /// file order. nullopt when no CFG exists.
    std::optional<size_t> cfg_home(const ApiSignature& method) const;

private:
    std::unordered_map<std::string, size_t> by_root_;
};

/// Mutable copy-on-write layer over one immutable Supergraph, holding the
/// nodes/edges added (and base edges suppressed) by dynamic successor
/// updates. One overlay per in-flight segment match; never shared.
class GraphOverlay {
public:
    GraphOverlay() = default;
    GraphOverlay(const Supergraph& base, const AppModel& model);

    const Supergraph& base() const { return *base_; }
    const AppModel& model() const { return *model_; }

    const std::vector<Node>& added_nodes() const { return added_nodes_; }
    const std::vector<Edge>& added_edges() const { return added_edges_; }
    const std::set<size_t>& removed_edges() const { return removed_; }

    bool has_node(NodeId id) const;
    /// Looks up a node in base or overlay; nullptr when unknown.
    const Node* find_node(NodeId id) const;

    NodeId add_node(Node n); // id must be fresh; returns it
    void add_edge(Edge e);
    /// Suppresses a base edge (by index into base().edges()).
    void remove_base_edge(size_t edge_index);
    void unremove_base_edge(size_t edge_index);

    /// Decoration nodes document resolved dynamic targets; they are not
    /// part of any method's control flow.
    void mark_decoration(NodeId id) { decorations_.insert(id); }
    bool is_decoration(NodeId id) const
    {
        return decorations_.count(id) > 0;
    }

    NodeId mint_node_id() { return next_id_++; }

    /// Memo for (call-site node, canonical target) -> embedded root node.
    std::optional<NodeId> memo_lookup(NodeId site,
                                      const std::string& target) const;
    void memo_store(NodeId site, const std::string& target, NodeId root);

    /// Indices into added_edges() with .from == id.
    const std::vector<size_t>& overlay_out_edges(NodeId id) const;

private:
    const Supergraph* base_ = nullptr;
    const AppModel* model_ = nullptr;
    std::vector<Node> added_nodes_;
    std::unordered_map<NodeId, size_t> added_index_;
    std::vector<Edge> added_edges_;
    std::unordered_map<NodeId, std::vector<size_t>> added_adjacency_;
    std::set<size_t> removed_;
    std::set<NodeId> decorations_;
    std::map<std::pair<NodeId, std::string>, NodeId> memo_;
    NodeId next_id_ = 0;

    static const std::vector<size_t> kNoEdges;
};

/// One outgoing edge as seen through an overlay.
struct Successor {
    NodeId to = 0;
    EdgeKind kind = EdgeKind::Flow;
    bool from_overlay = false;
};

/// Successors of `n` through `overlay`: base edges (minus removed ones) in
/// declaration order, then overlay edges in insertion order. Throws
/// ContractError when `n` is unknown to base and overlay.
std::vector<Successor> successors(const GraphOverlay& overlay, NodeId n);

/// Base-only successors (no overlay), in edge declaration order.
std::vector<Successor> successors(const Supergraph& g, NodeId n);

/// Spec operation neighbors(): successor nodes in visitation order.
std::vector<NodeId> neighbors(const GraphOverlay& overlay, NodeId n);

/// The unique Flow successor of a node, or nullopt when there is none or
/// more than one. Used for Return-edge wiring.
std::optional<NodeId> unique_flow_successor(const GraphOverlay& overlay,
                                            NodeId n);

/// Where control continues after `n` inside its method: the unique Flow
/// successor, ignoring decoration nodes.
std::optional<NodeId> continuation_successor(const GraphOverlay& overlay,
                                             NodeId n);

} // namespace logpath

#endif
