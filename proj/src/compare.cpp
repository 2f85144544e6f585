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

#include <map>
#include <sstream>

namespace logpath {

namespace {

std::map<int64_t, std::vector<NodeId>> per_tid_nodes(const MatchReport& r)
{
    std::map<int64_t, std::vector<NodeId>> out;
    for (const ThreadMatch& t : r.threads) {
        std::vector<NodeId>& nodes = out[t.tid];
        for (const PathSegment& s : t.results) {
            if (!s.ok) {
                return {}; // a failed segment disqualifies the report
            }
            nodes.insert(nodes.end(), s.nodes.begin(), s.nodes.end());
        }
    }
    return out;
}

std::map<int64_t, std::vector<NodeId>> per_tid_nodes(const GroundTruth& t)
{
    std::map<int64_t, std::vector<NodeId>> out;
    for (const TruthThread& thread : t.threads) {
        std::vector<NodeId>& nodes = out[thread.tid];
        for (const TruthSegment& s : thread.segments) {
            nodes.insert(nodes.end(), s.nodes.begin(), s.nodes.end());
        }
    }
    return out;
}

} // namespace

bool report_matches_truth(const MatchReport& report,
                          const GroundTruth& truth)
{
    if (!report.all_ok) {
        return false;
    }
    const auto got = per_tid_nodes(report);
    const auto want = per_tid_nodes(truth);
    if (got.empty() && !want.empty()) {
        return false;
    }
    return got == want;
}

ComparisonRow compare_strategies(const AppModel& model,
                                 const LogSequence& log,
                                 const GroundTruth& truth,
                                 const MatchConfig& base_cfg)
{
    ComparisonRow row;
    row.sum_logs = truth.app_records;
    for (const Supergraph& g : model.supergraphs) {
        row.sum_nodes += g.nodes().size();
        for (const Node& n : g.nodes()) {
            if (n.statement.kind == StmtKind::Branch) {
                ++row.sum_branch_nodes;
            }
        }
    }

    const auto run = [&](Strategy strategy) {
        MatchConfig cfg = base_cfg;
        cfg.strategy = strategy;
        const MatchReport report = match_all(model, log, cfg);
        StrategyOutcome outcome;
        outcome.ok = report.all_ok;
        outcome.time_sec = report.total_elapsed_ms / 1000.0;
        outcome.visited_nodes = report.total_visited;
        outcome.correct = report_matches_truth(report, truth);
        return outcome;
    };
    row.guided = run(Strategy::Guided);
    row.backtracking = run(Strategy::Backtracking);
    return row;
}

std::string comparison_csv_header()
{
    return "Sum of Logs,Sum of Nodes,Sum of Branch Nodes,"
           "Guided Time (sec),Guided Num of Visited Nodes,Guided Correct?,"
           "Backtracking Time (sec),Backtracking Num of Visited Nodes,"
           "Backtracking Correct?";
}

std::string comparison_csv_row(const ComparisonRow& row)
{
    std::ostringstream out;
    out << row.sum_logs << ',' << row.sum_nodes << ','
        << row.sum_branch_nodes << ',' << row.guided.time_sec << ','
        << row.guided.visited_nodes << ','
        << (row.guided.correct ? "yes" : "no") << ','
        << row.backtracking.time_sec << ','
        << row.backtracking.visited_nodes << ','
        << (row.backtracking.correct ? "yes" : "no");
    return out.str();
}

} // namespace logpath
