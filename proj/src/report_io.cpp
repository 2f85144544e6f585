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

#include "logpath/report_io.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

namespace logpath {

using nlohmann::json;

namespace {

json segment_to_json(const PathSegment& s, const LogSegment& seg)
{
    json js;
    js["callback"] = seg.callback.des.signature.canonical();
    js["body_records"] = seg.body.size();
    js["status"] = s.ok ? "ok" : "failed";
    if (!s.ok) {
        js["error"] = s.error;
        js["deepest_index"] = s.deepest_index;
    }
    js["nodes"] = s.nodes;
    json points = json::object();
    for (const auto& [pos, node] : s.match_points) {
        points[std::to_string(pos)] = node;
    }
    js["match_points"] = std::move(points);
    js["visited"] = s.visited;
    js["probe_visited"] = s.probe_visited;
    js["ambiguous"] = s.ambiguous;
    js["paths_found"] = s.paths_found;
    js["elapsed_ms"] = s.elapsed_ms;
    json overlay;
    overlay["added_nodes"] = s.ok ? s.overlay.added_nodes().size() : 0;
    overlay["added_edges"] = s.ok ? s.overlay.added_edges().size() : 0;
    overlay["removed_edges"] = s.ok ? s.overlay.removed_edges().size() : 0;
    js["overlay"] = std::move(overlay);
    return js;
}

/// True when (from, to) is an edge the overlay added (as opposed to one
/// of the base graph's own edges).
bool overlay_edge(const GraphOverlay& overlay, NodeId from, NodeId to)
{
    for (size_t ei : overlay.overlay_out_edges(from)) {
        if (overlay.added_edges()[ei].to == to) {
            return true;
        }
    }
    return false;
}

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

} // namespace

std::string serialize_report(const MatchReport& report,
                             const AppModel& model)
{
    (void)model;
    json doc;
    doc["strategy"] =
        report.strategy == Strategy::Guided ? "guided" : "backtracking";
    doc["all_ok"] = report.all_ok;
    doc["total_visited"] = report.total_visited;
    doc["elapsed_ms"] = report.total_elapsed_ms;
    json threads = json::array();
    for (const ThreadMatch& t : report.threads) {
        json jt;
        jt["tid"] = t.tid;
        json segments = json::array();
        for (size_t i = 0; i < t.results.size(); ++i) {
            segments.push_back(segment_to_json(t.results[i], t.segments[i]));
        }
        jt["segments"] = std::move(segments);
        json joins = json::array();
        for (const auto& [from, to] : t.joins) {
            joins.push_back(json::array({from, to}));
        }
        jt["joins"] = std::move(joins);
        jt["prelude"] = t.prelude_seqs;
        threads.push_back(std::move(jt));
    }
    doc["threads"] = std::move(threads);
    doc["diagnostics"] = report.diagnostics;
    return doc.dump(2) + "\n";
}

std::string report_to_dot(const MatchReport& report, const AppModel& model)
{
    std::ostringstream out;
    out << "digraph matched_path {\n";
    out << "  node [shape=box, fontsize=10];\n";
    for (const ThreadMatch& t : report.threads) {
        out << "  subgraph cluster_tid_" << t.tid << " {\n";
        out << "    label=\"tid " << t.tid << "\";\n";
        std::set<NodeId> declared;
        std::set<std::pair<NodeId, NodeId>> drawn;
        for (const PathSegment& s : t.results) {
            if (!s.ok) {
                continue;
            }
            std::set<NodeId> matched;
            for (const auto& [pos, node] : s.match_points) {
                matched.insert(node);
            }
            for (NodeId id : s.nodes) {
                if (!declared.insert(id).second) {
                    continue;
                }
                const Node* n = s.overlay.find_node(id);
                std::string label = "v" + std::to_string(id);
                if (n && !n->statement.display.empty()) {
                    label += "\\n" + dot_escape(n->statement.display);
                }
                out << "    n" << id << " [label=\"" << label << "\"";
                if (matched.count(id) > 0) {
                    out << ", style=filled, fillcolor=lightgray";
                }
                out << "];\n";
            }
            for (size_t i = 0; i + 1 < s.nodes.size(); ++i) {
                const auto key =
                    std::make_pair(s.nodes[i], s.nodes[i + 1]);
                if (!drawn.insert(key).second) {
                    continue;
                }
                out << "    n" << key.first << " -> n" << key.second;
                if (overlay_edge(s.overlay, key.first, key.second)) {
                    out << " [style=dashed]";
                }
                out << ";\n";
            }
        }
        for (const auto& [from, to] : t.joins) {
            out << "    n" << from << " -> n" << to
                << " [style=dotted, label=\"join\"];\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    (void)model;
    return out.str();
}

} // namespace logpath
