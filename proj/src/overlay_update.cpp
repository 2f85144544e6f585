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

#include "logpath/matcher.hpp"

#include <deque>
#include <set>
#include <unordered_map>

#include "logpath/errors.hpp"

namespace logpath {

namespace {

/// Methods reachable from `root` via static call sites inside `g`,
/// including `root` itself.
std::set<ApiSignature> static_call_closure(const Supergraph& g,
                                           const ApiSignature& root)
{
    std::set<ApiSignature> seen{root};
    std::deque<ApiSignature> queue{root};
    while (!queue.empty()) {
        const ApiSignature cur = queue.front();
        queue.pop_front();
        auto part = g.method_partition().find(cur);
        if (part == g.method_partition().end()) {
            continue;
        }
        for (NodeId id : part->second) {
            const Node* n = g.find_node(id);
            if (!n || n->statement.kind != StmtKind::Call ||
                !n->statement.callee ||
                n->statement.callee->kind != CalleeKind::Static) {
                continue;
            }
            const ApiSignature& callee = *n->statement.callee->target;
            if (seen.insert(callee).second) {
                queue.push_back(callee);
            }
        }
    }
    return seen;
}

/// Copies the CFGs of `methods` from `source` into the overlay with
/// fresh node ids, preserving edge order. Returns old-id -> new-id.
std::unordered_map<NodeId, NodeId>
copy_methods(GraphOverlay& overlay, const Supergraph& source,
             const std::set<ApiSignature>& methods)
{
    std::unordered_map<NodeId, NodeId> remap;
    for (const Node& n : source.nodes()) {
        if (methods.count(n.method.signature) == 0) {
            continue;
        }
        Node copy = n;
        copy.id = overlay.mint_node_id();
        remap.emplace(n.id, copy.id);
        overlay.add_node(std::move(copy));
    }
    for (const Edge& e : source.edges()) {
        auto from = remap.find(e.from);
        auto to = remap.find(e.to);
        if (from == remap.end() || to == remap.end()) {
            continue;
        }
        overlay.add_edge({from->second, to->second, e.kind});
    }
    return remap;
}

/// Embeds a copy of `method`'s sub-supergraph (taken from wherever its
/// CFG lives in the model) behind the call site `n`. Returns the copied
/// entry node id.
NodeId embed_method(GraphOverlay& overlay, const Node& n,
                    const ApiSignature& method, bool wire_return)
{
    const AppModel& model = overlay.model();
    auto home = model.cfg_home(method);
    if (!home) {
        throw UnknownTargetError("update: app-defined target " +
                                 method.canonical() +
                                 " has no CFG in the model");
    }
    const Supergraph& source = model.supergraphs[*home];
    const std::optional<NodeId> entry = source.entry_of(method);
    if (!entry) {
        throw UnknownTargetError("update: target " + method.canonical() +
                                 " lacks an entry node");
    }

    const std::set<ApiSignature> methods =
        static_call_closure(source, method);
    const auto remap = copy_methods(overlay, source, methods);
    const NodeId new_entry = remap.at(*entry);
    overlay.add_edge({n.id, new_entry, EdgeKind::CallEnter});

    if (wire_return) {
        const std::optional<NodeId> ret_to =
            unique_flow_successor(overlay, n.id);
        if (!ret_to) {
            throw ContractError("update: call site " +
                                std::to_string(n.id) +
                                " has no unique flow successor to return "
                                "to");
        }
        // Find the copied exit of the target method.
        std::optional<NodeId> exit_old;
        for (NodeId id : source.method_partition().at(method)) {
            const Node* cand = source.find_node(id);
            if (cand && cand->statement.kind == StmtKind::Exit) {
                exit_old = id;
                break;
            }
        }
        if (exit_old) {
            overlay.add_edge({remap.at(*exit_old), *ret_to,
                              EdgeKind::Return});
        }
    }
    return new_entry;
}

/// True when the model defines any method of this declaring unit, i.e.
/// the unit belongs to the app's own code.
bool is_app_unit(const AppModel& model, const std::string& unit)
{
    for (const Supergraph& g : model.supergraphs) {
        for (const auto& [method, ids] : g.method_partition()) {
            if (method.declaring_unit() == unit) {
                return true;
            }
        }
    }
    return false;
}

UpdateResult finish(const GraphOverlay& overlay, const Node& n,
                    std::vector<size_t> removed)
{
    UpdateResult res;
    res.successor_ids = neighbors(overlay, n.id);
    res.removed_base_edges = std::move(removed);
    return res;
}

UpdateResult update_reflective(GraphOverlay& overlay, const Node& n,
                               const Des& des)
{
    const ApiSignature target = des.reflective->signature();
    const std::string key = "reflect:" + target.canonical();
    if (overlay.memo_lookup(n.id, key)) {
        return finish(overlay, n, {});
    }

    const AppModel& model = overlay.model();
    if (model.cfg_home(target)) {
        // App-defined target: embed its sub-supergraph.
        const NodeId entry = embed_method(overlay, n, target, true);
        overlay.memo_store(n.id, key, entry);
        return finish(overlay, n, {});
    }
    if (is_app_unit(model, target.declaring_unit())) {
        throw UnknownTargetError("update: reflective target " +
                                 target.canonical() +
                                 " names an app unit but has no CFG in "
                                 "the model");
    }

    // Framework target: insert a node that explicitly invokes the target
    // as a successor of n. It gets no outgoing edges of its own, so it
    // documents the resolved call without opening a second way around
    // the callsite's real continuation.
    Node inserted;
    inserted.id = overlay.mint_node_id();
    inserted.method = n.method;
    inserted.statement.kind = StmtKind::Call;
    inserted.statement.display = target.canonical();
    inserted.statement.callee = CalleeRef{CalleeKind::Framework, target};

    overlay.add_node(inserted);
    overlay.add_edge({n.id, inserted.id, EdgeKind::Flow});
    overlay.memo_store(n.id, key, inserted.id);
    return finish(overlay, n, {});
}

UpdateResult update_icc(GraphOverlay& overlay, const Node& n, const Des& des)
{
    const AppModel& model = overlay.model();
    const std::string& component = des.icc->target_component;

    // Registered callbacks of the receiver component.
    std::vector<ApiSignature> candidates;
    for (const ApiSignature& cb : model.callback_registry) {
        if (cb.declaring_unit() == component) {
            candidates.push_back(cb);
        }
    }
    if (candidates.empty()) {
        throw UnknownTargetError("update: icc target component " +
                                 component +
                                 " has no registered callback");
    }

    // Suppress statically guessed links that contradict the log and
    // detect whether a consistent one already exists.
    std::vector<size_t> removed;
    bool consistent_link = false;
    const Supergraph& base = overlay.base();
    for (size_t ei : base.out_edges(n.id)) {
        const Edge& e = base.edges()[ei];
        if (e.kind != EdgeKind::CallEnter) {
            continue;
        }
        const Node* entry = base.find_node(e.to);
        if (!entry) {
            continue;
        }
        const bool matches =
            entry->method.signature.declaring_unit() == component;
        if (matches) {
            if (overlay.removed_edges().count(ei) == 0) {
                consistent_link = true;
            }
        } else if (overlay.removed_edges().count(ei) == 0) {
            overlay.remove_base_edge(ei);
            removed.push_back(ei);
        }
    }

    const std::string key = "icc:" + component;
    if (!consistent_link && !overlay.memo_lookup(n.id, key)) {
        // Static analysis missed the receiver: wire it in from its own
        // supergraph.
        std::optional<ApiSignature> with_graph;
        for (const ApiSignature& cb : candidates) {
            if (model.supergraph_for(cb)) {
                with_graph = cb;
                break;
            }
        }
        if (!with_graph) {
            throw UnknownTargetError("update: icc target component " +
                                     component +
                                     " has no callback supergraph");
        }
        const NodeId entry = embed_method(overlay, n, *with_graph, false);
        overlay.memo_store(n.id, key, entry);
    }
    return finish(overlay, n, std::move(removed));
}

} // namespace

UpdateResult update_successors(GraphOverlay& overlay, const Node& n,
                               const Des& des)
{
    if (n.statement.kind != StmtKind::Call || !n.statement.callee) {
        throw ContractError("update: node " + std::to_string(n.id) +
                            " is not a call");
    }
    const CalleeKind kind = n.statement.callee->kind;
    if (kind == CalleeKind::Reflective) {
        if (des.special != SpecialKind::Reflective || !des.reflective) {
            throw ContractError("update: node " + std::to_string(n.id) +
                                " is reflective but the record is not");
        }
        return update_reflective(overlay, n, des);
    }
    if (kind == CalleeKind::Icc) {
        if (des.special != SpecialKind::Icc || !des.icc) {
            throw ContractError("update: node " + std::to_string(n.id) +
                                " is icc but the record is not");
        }
        return update_icc(overlay, n, des);
    }
    throw ContractError("update: node " + std::to_string(n.id) +
                        " is neither reflective nor icc");
}

} // namespace logpath
