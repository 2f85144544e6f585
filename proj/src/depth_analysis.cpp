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

#include "logpath/simulator.hpp"

#include <deque>
#include <map>
#include <unordered_map>

#include "logpath/errors.hpp"

namespace logpath {

namespace {

/// Shortest entry-to-method chain lengths over the call structure of one
/// supergraph (root callback at depth 1).
std::map<std::string, int> method_depths(const Supergraph& g)
{
    std::map<std::string, int> depth;
    const std::string root = g.root_callback().signature.canonical();
    depth[root] = 1;
    std::deque<std::string> queue{root};
    // caller method -> callee methods, via call edges.
    std::unordered_map<std::string, std::vector<std::string>> callees;
    for (const Edge& e : g.edges()) {
        if (e.kind != EdgeKind::CallEnter) {
            continue;
        }
        const Node* from = g.find_node(e.from);
        const Node* to = g.find_node(e.to);
        if (from && to) {
            callees[from->method.signature.canonical()].push_back(
                to->method.signature.canonical());
        }
    }
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        auto it = callees.find(cur);
        if (it == callees.end()) {
            continue;
        }
        for (const std::string& callee : it->second) {
            if (depth.find(callee) == depth.end()) {
                depth[callee] = depth[cur] + 1;
                queue.push_back(callee);
            }
        }
    }
    return depth;
}

bool site_is_logged(const Node& n, const std::set<ApiSignature>& logged)
{
    if (n.statement.kind != StmtKind::Call || !n.statement.callee) {
        return false;
    }
    switch (n.statement.callee->kind) {
    case CalleeKind::Framework:
        return logged.count(*n.statement.callee->target) > 0;
    case CalleeKind::Reflective:
    case CalleeKind::Icc:
        return true;
    case CalleeKind::Static:
        return false;
    }
    return false;
}

} // namespace

std::vector<CdfRow> depth_cdf(const AppModel& model,
                              const std::set<ApiSignature>& logged)
{
    std::map<int, size_t> histogram;
    size_t total = 0;
    for (const Supergraph& g : model.supergraphs) {
        const std::map<std::string, int> depths = method_depths(g);
        for (const Node& n : g.nodes()) {
            if (!site_is_logged(n, logged)) {
                continue;
            }
            auto it = depths.find(n.method.signature.canonical());
            if (it == depths.end()) {
                continue; // method unreachable from the entry point
            }
            histogram[it->second]++;
            ++total;
        }
    }
    std::vector<CdfRow> rows;
    if (total == 0) {
        return rows;
    }
    size_t cumulative = 0;
    for (const auto& [depth, count] : histogram) {
        cumulative += count;
        rows.push_back(
            {depth, static_cast<double>(cumulative) /
                        static_cast<double>(total)});
    }
    return rows;
}

double coverage_at(const std::vector<CdfRow>& cdf, int k)
{
    double coverage = 0.0;
    for (const CdfRow& row : cdf) {
        if (row.k > k) {
            break;
        }
        coverage = row.coverage;
    }
    return coverage;
}

int select_k(const std::vector<CdfRow>& cdf,
             const std::vector<OverheadRow>& overhead)
{
    if (cdf.empty() || overhead.empty()) {
        throw ContractError("select_k: tables must be non-empty");
    }
    for (const OverheadRow& row : overhead) {
        if (row.overhead <= 0.0) {
            throw ContractError("select_k: overhead must be strictly "
                                "positive");
        }
    }
    int best_k = overhead.front().k;
    double best_ratio = -1.0;
    for (const OverheadRow& row : overhead) {
        const double ratio = coverage_at(cdf, row.k) / row.overhead;
        if (ratio > best_ratio ||
            (ratio == best_ratio && row.k < best_k)) {
            best_ratio = ratio;
            best_k = row.k;
        }
    }
    return best_k;
}

} // namespace logpath
