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

#ifndef LOGPATH_MATCHER_HPP
#define LOGPATH_MATCHER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logpath/emu_stack.hpp"
#include "logpath/graph.hpp"
#include "logpath/log.hpp"

namespace logpath {

enum class Strategy : uint8_t { Guided, Backtracking };

struct MatchConfig {
    Strategy strategy = Strategy::Guided;
    /// Stop after this many satisfying paths. The default of 2 is the
    /// ambiguity probe: find the first path, then check whether a second
    /// one exists.
    uint64_t max_paths = 2;
    /// Count all satisfying paths instead of stopping at max_paths.
    bool enumerate_all = false;
    /// Forward-search budget while the window gives no guidance,
    /// per record.
    uint64_t unguided_budget_per_record = 100000;
    /// Hard cap on node-visit events per segment.
    uint64_t max_visits = 50000000;
    std::optional<int64_t> pid;
    std::optional<std::vector<std::string>> library_prefix_override;
    /// Worker threads for independent segment matches; 0 = auto.
    unsigned jobs = 0;
};

/// Verdict for a node about to be visited, from the stack-info checks.
enum class NodeDecision : uint8_t { Proceed, Backtrack, ForwardUnguided };

/// Decides whether node `n` should be visited next, given the record last
/// matched and the record to be matched. `emu_cur` must already reflect
/// the traversal up to `n` (its method pushed if newly entered).
///
/// Computes dis = (lr_next.D - lr_last.D) - (|emu_cur| - |emu_last|):
///   dis < 0          -> Backtrack (the target callsite is shallower)
///   0 <= dis < |P|   -> Proceed iff the window frames align, else
///                       Backtrack
///   dis >= |P|       -> ForwardUnguided (the window cannot be used yet)
NodeDecision node_checking(const Node& n, const LogRecord& lr_last,
                           const LogRecord& lr_next,
                           const EmuStack& emu_last, const EmuStack& emu_cur);

/// Window alignment check. `target_chain_len` is the emulated chain
/// length at the record to be matched (|emu at last match| + delta-D);
/// the window `p` covers chain depths [target_chain_len - |p|,
/// target_chain_len). Every current frame inside that range must equal
/// the corresponding window entry.
bool is_matched(const EmuStack& emu_cur, const std::vector<ApiSignature>& p,
                int64_t target_chain_len);

struct UpdateResult {
    /// n's successor list after the update, in visitation order.
    std::vector<NodeId> successor_ids;
    /// Base-edge indices suppressed by this application (for rollback on
    /// backtracking; node/edge additions are memoized and stay).
    std::vector<size_t> removed_base_edges;
};

/// Rebuilds the successors of a Reflective or Icc call node from the log
/// record's description (the runtime arguments are the sole authority):
///  - reflective, framework target: inserts one node that explicitly
///    invokes the target;
///  - reflective, app-defined target: embeds a copy of the target
///    method's sub-supergraph behind CallEnter/Return wiring;
///  - icc: keeps/creates the link to the logged receiver's callback CFG
///    and suppresses statically guessed links that contradict the log.
/// Memoized per (call-site, target); reapplication changes nothing.
UpdateResult update_successors(GraphOverlay& overlay, const Node& n,
                               const Des& des);

struct PathSegment {
    size_t segment_index = 0;
    bool ok = false;
    std::string error; // set when !ok
    /// Deepest record position reached; diagnostic for tampered or
    /// incomplete logs when no match exists.
    size_t deepest_index = 0;
    /// The accepted walk, callback entry first, ending at the node
    /// matched with the last record.
    std::vector<NodeId> nodes;
    /// (record position, node id); position 0 is the callback record.
    std::vector<std::pair<size_t, NodeId>> match_points;
    bool ambiguous = false;
    uint64_t paths_found = 0;
    /// Node-visit events up to the first satisfying path.
    uint64_t visited = 0;
    /// Extra events spent probing for further paths.
    uint64_t probe_visited = 0;
    double elapsed_ms = 0.0;
    GraphOverlay overlay; // state at first success
};

/// Matches one log segment against its callback's supergraph with the
/// stack-guided strategy. The callback record anchors at the entry node;
/// the walk is explored in edge-declaration order, so the first
/// satisfying path is deterministic.
PathSegment match_segment(const Supergraph& g, const AppModel& model,
                          const LogSegment& seg, const MatchConfig& cfg);

/// The pure-backtracking baseline: identical walk mechanics but records
/// are matched by des signature/kind equality only; the call-stack info
/// is never consulted.
PathSegment match_segment_backtracking(const Supergraph& g,
                                       const AppModel& model,
                                       const LogSegment& seg,
                                       const MatchConfig& cfg);

struct CombinedPath {
    std::vector<NodeId> nodes;
    /// (last node of segment i, first node of segment i+1).
    std::vector<std::pair<NodeId, NodeId>> joins;
};

/// Stitches per-segment paths in logging order. Throws ContractError
/// naming the first failed segment, if any.
CombinedPath combine(const std::vector<PathSegment>& segments);

struct ThreadMatch {
    int64_t tid = 0;
    std::vector<LogSegment> segments;
    std::vector<PathSegment> results;
    std::vector<std::pair<NodeId, NodeId>> joins; // when all segments ok
    bool combined = false;
    std::vector<int64_t> prelude_seqs;
};

struct MatchReport {
    Strategy strategy = Strategy::Guided;
    bool all_ok = false;
    std::vector<ThreadMatch> threads;
    std::vector<std::string> diagnostics;
    uint64_t total_visited = 0;
    double total_elapsed_ms = 0.0;

    /// Matched node ids of every successful segment, in thread/log
    /// order. The shape compared against a simulation's ground truth.
    std::vector<NodeId> flattened_nodes() const;
};

/// The whole pipeline: scope, filter, partition by thread, segment,
/// match every segment (in parallel when allowed), combine per thread.
/// Segment failures land in the report; they do not abort the rest.
MatchReport match_all(const AppModel& model, const LogSequence& log,
                      const MatchConfig& cfg);

} // namespace logpath

#endif
