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

#include "logpath/validate.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace logpath {

namespace {

std::string node_str(NodeId id) { return std::to_string(id); }

void check_supergraph(const AppModel& model, const Supergraph& g,
                      size_t graph_index, std::vector<std::string>& out)
{
    const std::string where =
        "supergraph " + g.root_callback().signature.canonical();

    // Root callback must be registered and must own a CFG here.
    if (!model.is_callback(g.root_callback().signature)) {
        out.push_back(where + ": root missing from callback registry");
    }
    if (!g.root_entry()) {
        out.push_back(where + ": no entry node for the root callback");
    }

    // Duplicate ids within the graph.
    std::unordered_set<NodeId> seen;
    for (const Node& n : g.nodes()) {
        if (!seen.insert(n.id).second) {
            out.push_back(where + ": node id " + node_str(n.id) +
                          " duplicated within supergraph");
        }
    }

    // Edge endpoints.
    for (const Edge& e : g.edges()) {
        if (!g.contains(e.from)) {
            out.push_back(where + ": edge endpoint " + node_str(e.from) +
                          " undefined");
        }
        if (!g.contains(e.to)) {
            out.push_back(where + ": edge endpoint " + node_str(e.to) +
                          " undefined");
        }
    }

    // Per-method bookkeeping: entry/exit counts, flow adjacency.
    std::unordered_map<std::string, int> entry_count;
    std::unordered_map<std::string, int> exit_count;
    std::unordered_map<NodeId, std::vector<NodeId>> flow_succ;
    std::unordered_map<NodeId, int> flow_out_degree;
    for (const Node& n : g.nodes()) {
        const std::string m = n.method.signature.canonical();
        if (n.statement.kind == StmtKind::Entry) {
            entry_count[m]++;
        }
        if (n.statement.kind == StmtKind::Exit) {
            exit_count[m]++;
        }
    }
    for (const Edge& e : g.edges()) {
        const Node* from = g.find_node(e.from);
        const Node* to = g.find_node(e.to);
        if (!from || !to) {
            continue; // endpoint problem already reported
        }
        if (e.kind == EdgeKind::Flow) {
            if (from->method.signature != to->method.signature) {
                out.push_back(where + ": flow edge " + node_str(e.from) +
                              " -> " + node_str(e.to) +
                              " crosses methods");
            }
            flow_succ[e.from].push_back(e.to);
            flow_out_degree[e.from]++;
        }
    }

    for (const auto& [method, ids] : g.method_partition()) {
        const std::string m = method.canonical();
        const int entries = entry_count.count(m) ? entry_count[m] : 0;
        const int exits = exit_count.count(m) ? exit_count[m] : 0;
        if (entries != 1) {
            out.push_back(where + ": method " + m + " has " +
                          std::to_string(entries) +
                          " entry nodes (expected 1)");
        }
        if (exits != 1) {
            out.push_back(where + ": method " + m + " has " +
                          std::to_string(exits) +
                          " exit nodes (expected 1)");
        }
        if (entries != 1) {
            continue; // reachability needs a single entry
        }
        // Flow reachability inside the method.
        std::unordered_set<NodeId> reached;
        std::deque<NodeId> queue{*g.entry_of(method)};
        reached.insert(queue.front());
        while (!queue.empty()) {
            const NodeId cur = queue.front();
            queue.pop_front();
            auto it = flow_succ.find(cur);
            if (it == flow_succ.end()) {
                continue;
            }
            for (NodeId next : it->second) {
                if (reached.insert(next).second) {
                    queue.push_back(next);
                }
            }
        }
        for (NodeId id : ids) {
            if (reached.count(id) == 0) {
                out.push_back(where + ": node " + node_str(id) +
                              " unreachable from entry of method " + m);
            }
        }
    }

    // Statement-level checks and call wiring.
    for (const Node& n : g.nodes()) {
        const int degree =
            flow_out_degree.count(n.id) ? flow_out_degree[n.id] : 0;
        if (n.statement.kind == StmtKind::Branch && degree < 2) {
            out.push_back(where + ": branch node " + node_str(n.id) +
                          " has fewer than 2 successors");
        }
        if (n.statement.kind == StmtKind::Call && !n.statement.callee) {
            out.push_back(where + ": call node " + node_str(n.id) +
                          " lacks a callee");
        }
    }

    for (const Edge& e : g.edges()) {
        const Node* from = g.find_node(e.from);
        const Node* to = g.find_node(e.to);
        if (!from || !to) {
            continue;
        }
        if (e.kind == EdgeKind::CallEnter) {
            if (from->statement.kind != StmtKind::Call ||
                !from->statement.callee) {
                out.push_back(where + ": call edge from non-call node " +
                              node_str(e.from));
                continue;
            }
            if (to->statement.kind != StmtKind::Entry) {
                out.push_back(where + ": call edge " + node_str(e.from) +
                              " -> " + node_str(e.to) +
                              " does not target an entry node");
                continue;
            }
            const CalleeRef& callee = *from->statement.callee;
            switch (callee.kind) {
            case CalleeKind::Static:
                if (to->method.signature != *callee.target) {
                    out.push_back(where + ": call edge " + node_str(e.from) +
                                  " targets entry of " +
                                  to->method.signature.canonical() +
                                  " but callee is " +
                                  callee.target->canonical());
                }
                break;
            case CalleeKind::Framework:
                out.push_back(where + ": framework call node " +
                              node_str(e.from) +
                              " must not have call edges");
                break;
            case CalleeKind::Reflective:
                out.push_back(where + ": reflective call node " +
                              node_str(e.from) +
                              " must not have static call edges");
                break;
            case CalleeKind::Icc:
                break; // statically guessed links are allowed
            }
        } else if (e.kind == EdgeKind::Return) {
            if (from->statement.kind != StmtKind::Exit) {
                out.push_back(where + ": return edge from non-exit node " +
                              node_str(e.from));
                continue;
            }
            // The target must be the unique flow successor of some call
            // node that enters this exit's method.
            bool ok = false;
            for (const Edge& c : g.edges()) {
                if (c.kind != EdgeKind::CallEnter) {
                    continue;
                }
                const Node* callee_entry = g.find_node(c.to);
                const Node* call_node = g.find_node(c.from);
                if (!callee_entry || !call_node ||
                    callee_entry->method.signature !=
                        from->method.signature) {
                    continue;
                }
                auto it = flow_succ.find(c.from);
                if (it != flow_succ.end() && it->second.size() == 1 &&
                    it->second[0] == e.to) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                out.push_back(
                    where + ": return edge " + node_str(e.from) + " -> " +
                    node_str(e.to) +
                    " does not target the unique flow successor of an "
                    "originating call node");
            }
        }
    }

    // Static callees must have their CFG and a call edge in this graph.
    for (const Node& n : g.nodes()) {
        if (n.statement.kind != StmtKind::Call || !n.statement.callee ||
            n.statement.callee->kind != CalleeKind::Static) {
            continue;
        }
        const ApiSignature& target = *n.statement.callee->target;
        if (g.method_partition().count(target) == 0) {
            out.push_back(where + ": static callee " + target.canonical() +
                          " of node " + node_str(n.id) +
                          " has no CFG in this supergraph");
            continue;
        }
        bool wired = false;
        for (size_t ei : g.out_edges(n.id)) {
            const Edge& e = g.edges()[ei];
            if (e.kind == EdgeKind::CallEnter) {
                const Node* to = g.find_node(e.to);
                if (to && to->method.signature == target) {
                    wired = true;
                }
            }
        }
        if (!wired) {
            out.push_back(where + ": static call node " + node_str(n.id) +
                          " lacks a call edge to " + target.canonical());
        }
    }

    (void)graph_index;
}

} // namespace

std::vector<std::string> validate(const AppModel& model)
{
    std::vector<std::string> out;

    // Node-id disjointness across supergraphs.
    std::unordered_map<NodeId, size_t> owner;
    for (size_t i = 0; i < model.supergraphs.size(); ++i) {
        for (const Node& n : model.supergraphs[i].nodes()) {
            auto [it, inserted] = owner.emplace(n.id, i);
            if (!inserted && it->second != i) {
                out.push_back("node id " + std::to_string(n.id) +
                              " duplicated across supergraphs");
            }
        }
    }

    for (size_t i = 0; i < model.supergraphs.size(); ++i) {
        check_supergraph(model, model.supergraphs[i], i, out);
    }
    return out;
}

} // namespace logpath
