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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>
#include <unordered_map>

#include "logpath/errors.hpp"
#include "logpath/log_pipeline.hpp"

namespace logpath {

namespace {

uint64_t mix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t saturating_add(uint64_t a, uint64_t b)
{
    const uint64_t cap = uint64_t(1) << 62;
    if (a >= cap || b >= cap || a + b >= cap) {
        return cap;
    }
    return a + b;
}

} // namespace

NodeDecision node_checking(const Node& n, const LogRecord& lr_last,
                           const LogRecord& lr_next,
                           const EmuStack& emu_last, const EmuStack& emu_cur)
{
    (void)n; // emu_cur already reflects the traversal up to n
    const int64_t delta_d = lr_next.csi.d - lr_last.csi.d;
    const int64_t delta_len = static_cast<int64_t>(emu_cur.size()) -
                              static_cast<int64_t>(emu_last.size());
    const int64_t dis = delta_d - delta_len;
    if (dis < 0) {
        return NodeDecision::Backtrack;
    }
    const int64_t window = static_cast<int64_t>(lr_next.csi.p.size());
    if (dis < window) {
        const int64_t target_chain =
            static_cast<int64_t>(emu_last.size()) + delta_d;
        return is_matched(emu_cur, lr_next.csi.p, target_chain)
                   ? NodeDecision::Proceed
                   : NodeDecision::Backtrack;
    }
    return NodeDecision::ForwardUnguided;
}

bool is_matched(const EmuStack& emu_cur, const std::vector<ApiSignature>& p,
                int64_t target_chain_len)
{
    const int64_t window_start =
        std::max<int64_t>(0, target_chain_len -
                                 static_cast<int64_t>(p.size()));
    const int64_t upto = std::min<int64_t>(
        static_cast<int64_t>(emu_cur.size()), target_chain_len);
    for (int64_t i = window_start; i < upto; ++i) {
        if (emu_cur.method_at(static_cast<size_t>(i)) !=
            p[static_cast<size_t>(i - window_start)]) {
            return false;
        }
    }
    return true;
}

namespace {

/// Thrown internally to abort a segment search (budget exhaustion,
/// unresolvable dynamic target).
struct AbortSearch {
    std::string reason;
};

struct StateInfo {
    uint8_t status = 0; // 0 = in progress, 1 = failed, 2 = succeeded
    bool cycle_hit = false;
    uint64_t path_count = 0;
};

struct Frame {
    NodeId node = 0;
    uint8_t via = 0; // 0 root, 1 flow, 2 call-enter, 3 return
    bool expanded = false;
    bool on_path = false;
    bool matched_here = false;
    bool pushed_state = false;
    /// The emulated chain sits deeper than the next record's callsite;
    /// the walk may only move toward exits (no new descents) until it
    /// has climbed back.
    bool climbing = false;
    uint64_t state_key = 0;
    uint64_t paths_through = 0;
    EmuStack::Frame popped_frame; // saved when via == 3
    std::vector<Successor> succ;
    size_t next_succ = 0;
    std::vector<size_t> icc_removed;
};

class SegmentMatcher {
public:
    SegmentMatcher(const Supergraph& g, const AppModel& model,
                   const LogSegment& seg, const MatchConfig& cfg,
                   bool guided)
        : graph_(g), model_(model), cfg_(cfg), guided_(guided),
          overlay_(g, model)
    {
        records_.push_back(seg.callback);
        for (const LogRecord& r : seg.body) {
            records_.push_back(r);
        }
    }

    PathSegment run()
    {
        PathSegment out;
        const auto start = std::chrono::steady_clock::now();
        try {
            check_preconditions();
            search();
            if (result_.paths_found == 0) {
                out.ok = false;
                out.error = "no satisfying path";
            } else {
                out = std::move(result_);
                out.ok = true;
            }
        } catch (const AbortSearch& abort) {
            out.ok = false;
            out.error = abort.reason;
        }
        out.deepest_index = deepest_ > 0 ? deepest_ - 1 : 0;
        if (!out.ok) {
            out.visited = visits_;
            out.paths_found = 0;
        }
        out.elapsed_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
        return out;
    }

private:
    const Supergraph& graph_;
    const AppModel& model_;
    const MatchConfig& cfg_;
    const bool guided_;

    std::vector<LogRecord> records_; // [0] = callback record
    GraphOverlay overlay_;
    EmuStack emu_;
    std::vector<EmuStack> snapshots_; // emu at each matched record
    size_t index_ = 1;                // next record to match
    size_t deepest_ = 1;
    std::vector<NodeId> path_;
    std::vector<std::pair<size_t, NodeId>> match_points_;
    std::unordered_map<uint64_t, StateInfo> memo_;
    std::vector<uint64_t> unguided_visits_;
    uint64_t visits_ = 0;
    uint64_t visits_at_first_ = 0;
    uint64_t paths_found_ = 0;
    bool ambiguous_ = false;
    bool stop_ = false;
    PathSegment result_;
    std::vector<Frame> stack_;

    void check_preconditions()
    {
        const ApiSignature& cb = records_[0].des.signature;
        if (graph_.root_callback().signature != cb) {
            throw ContractError(
                "match_segment: segment callback " + cb.canonical() +
                " does not root supergraph " +
                graph_.root_callback().signature.canonical());
        }
        for (size_t i = 1; i < records_.size(); ++i) {
            if (!model_.is_logged_api(records_[i].des.signature)) {
                throw ContractError("match_segment: body record seq " +
                                    std::to_string(records_[i].seq) +
                                    " signature " +
                                    records_[i].des.signature.canonical() +
                                    " is not a logged API");
            }
        }
    }

    uint64_t state_key(NodeId node) const
    {
        uint64_t h = mix64(static_cast<uint64_t>(node));
        h = mix64(h ^ static_cast<uint64_t>(index_));
        h = mix64(h ^ emu_.digest());
        h = mix64(h ^ static_cast<uint64_t>(emu_.size()));
        return h;
    }

    const Node& node_at(NodeId id) const
    {
        const Node* n = overlay_.find_node(id);
        if (!n) {
            throw ContractError("match: unknown node " + std::to_string(id));
        }
        return *n;
    }

    bool is_logged_site(const Node& n) const
    {
        if (n.statement.kind != StmtKind::Call || !n.statement.callee) {
            return false;
        }
        switch (n.statement.callee->kind) {
        case CalleeKind::Framework:
            return model_.is_logged_api(*n.statement.callee->target);
        case CalleeKind::Reflective:
        case CalleeKind::Icc:
            return true; // mechanism APIs are always logged
        case CalleeKind::Static:
            return false;
        }
        return false;
    }

    bool record_matches(const Node& n, const LogRecord& rec) const
    {
        const CalleeRef& callee = *n.statement.callee;
        switch (callee.kind) {
        case CalleeKind::Framework:
            return rec.des.special == SpecialKind::None &&
                   *callee.target == rec.des.signature;
        case CalleeKind::Reflective:
            return rec.des.special == SpecialKind::Reflective;
        case CalleeKind::Icc:
            return rec.des.special == SpecialKind::Icc;
        case CalleeKind::Static:
            return false;
        }
        return false;
    }

    /// The guided gate for accepting a record at the current node: the
    /// emulated chain must sit exactly at the record's depth and the
    /// whole window must align.
    bool position_ok(const LogRecord& lr_last, const LogRecord& lr_next)
        const
    {
        const int64_t delta_d = lr_next.csi.d - lr_last.csi.d;
        const int64_t delta_len =
            static_cast<int64_t>(emu_.size()) -
            static_cast<int64_t>(snapshots_.back().size());
        if (delta_d != delta_len) {
            return false;
        }
        const int64_t target_chain =
            static_cast<int64_t>(snapshots_.back().size()) + delta_d;
        return is_matched(emu_, lr_next.csi.p, target_chain);
    }

    /// Returns false when a budget ran out while probing for further
    /// paths (the probe just ends); throws when no path was found yet.
    bool count_visit(NodeDecision decision)
    {
        ++visits_;
        if (visits_ > cfg_.max_visits) {
            if (result_.paths_found > 0) {
                stop_ = true;
                return false;
            }
            throw AbortSearch{"visit budget exhausted (" +
                              std::to_string(cfg_.max_visits) + ")"};
        }
        if (decision == NodeDecision::ForwardUnguided) {
            if (unguided_visits_.size() <= index_) {
                unguided_visits_.resize(index_ + 1, 0);
            }
            if (++unguided_visits_[index_] >
                cfg_.unguided_budget_per_record) {
                if (result_.paths_found > 0) {
                    stop_ = true;
                    return false;
                }
                throw AbortSearch{
                    "unguided search budget exhausted at record " +
                    std::to_string(index_)};
            }
        }
        return true;
    }

    void register_paths(uint64_t count, Frame& frame)
    {
        frame.paths_through = saturating_add(frame.paths_through, count);
        paths_found_ = saturating_add(paths_found_, count);
        if (paths_found_ > 1) {
            ambiguous_ = true;
        }
        if (!cfg_.enumerate_all && paths_found_ >= cfg_.max_paths) {
            stop_ = true;
        }
    }

    void capture_success()
    {
        if (result_.paths_found > 0) {
            return; // keep the first (deterministic) path
        }
        result_.nodes = path_;
        result_.match_points = match_points_;
        result_.overlay = overlay_;
        result_.paths_found = 1;
        visits_at_first_ = visits_;
    }

    void finalize_result()
    {
        if (result_.paths_found == 0) {
            return;
        }
        result_.paths_found = paths_found_;
        result_.ambiguous = ambiguous_;
        result_.visited = visits_at_first_;
        result_.probe_visited = visits_ - visits_at_first_;
    }

    // Undo everything frame did, in reverse order.
    void unwind(Frame& f)
    {
        if (f.matched_here) {
            for (auto it = f.icc_removed.rbegin();
                 it != f.icc_removed.rend(); ++it) {
                overlay_.unremove_base_edge(*it);
            }
            snapshots_.pop_back();
            match_points_.pop_back();
            --index_;
            f.matched_here = false;
        }
        if (f.on_path) {
            path_.pop_back();
            f.on_path = false;
        }
        switch (f.via) {
        case 2:
            emu_.pop();
            break;
        case 3:
            emu_.push(f.popped_frame);
            break;
        default:
            break;
        }
    }

    void finalize_state(Frame& f)
    {
        if (!f.pushed_state) {
            return;
        }
        StateInfo& info = memo_[f.state_key];
        if (f.paths_through > 0) {
            info.status = 2;
            info.path_count = f.paths_through;
            if (info.cycle_hit) {
                // A cycle reaches this completable state: the walk can be
                // pumped, so the path family is unbounded.
                ambiguous_ = true;
                paths_found_ = saturating_add(paths_found_, 1);
                if (!cfg_.enumerate_all && paths_found_ >= cfg_.max_paths) {
                    stop_ = true;
                }
            }
        } else {
            info.status = 1;
        }
    }

    std::optional<NodeId> base_flow_successor(NodeId n) const
    {
        std::optional<NodeId> found;
        for (size_t ei : graph_.out_edges(n)) {
            if (overlay_.removed_edges().count(ei) > 0) {
                continue;
            }
            const Edge& e = graph_.edges()[ei];
            if (e.kind != EdgeKind::Flow) {
                continue;
            }
            if (found) {
                return std::nullopt;
            }
            found = e.to;
        }
        return found;
    }

    /// First visit of a frame: memoization, stack checks, match attempt.
    /// Returns false when the frame must be discarded without expansion.
    bool enter(Frame& f)
    {
        f.state_key = state_key(f.node);
        auto it = memo_.find(f.state_key);
        if (it != memo_.end()) {
            if (it->second.status == 1) {
                return false; // known dead state
            }
            if (it->second.status == 2) {
                // Reached a completable state along a different prefix:
                // that is one more satisfying path per known completion.
                register_paths(std::max<uint64_t>(1, it->second.path_count),
                               f);
                return false;
            }
            it->second.cycle_hit = true; // back edge to the current path
            return false;
        }
        memo_.emplace(f.state_key, StateInfo{});
        f.pushed_state = true;

        const Node& n = node_at(f.node);
        const LogRecord& lr_last = records_[index_ - 1];
        const LogRecord& lr_next = records_[index_];
        NodeDecision decision = NodeDecision::Proceed;
        if (guided_) {
            const int64_t delta_d = lr_next.csi.d - lr_last.csi.d;
            const int64_t dis =
                delta_d - (static_cast<int64_t>(emu_.size()) -
                           static_cast<int64_t>(snapshots_.back().size()));
            if (dis < 0) {
                // Deeper than the target callsite: the walk must climb
                // via exits and returns; it must not descend further.
                f.climbing = true;
            } else if (dis < static_cast<int64_t>(lr_next.csi.p.size())) {
                const int64_t target_chain =
                    static_cast<int64_t>(snapshots_.back().size()) +
                    delta_d;
                if (!is_matched(emu_, lr_next.csi.p, target_chain)) {
                    return false; // off the recorded caller chain
                }
            } else {
                decision = NodeDecision::ForwardUnguided;
            }
        }
        if (!count_visit(decision)) {
            return false;
        }
        path_.push_back(f.node);
        f.on_path = true;

        if (is_logged_site(n)) {
            // A walk passing a logged callsite must have produced a
            // record, so the next record has to match right here.
            const bool accept =
                record_matches(n, lr_next) &&
                (!guided_ || position_ok(lr_last, lr_next));
            if (!accept) {
                return false;
            }
            if (n.statement.callee->kind == CalleeKind::Reflective ||
                n.statement.callee->kind == CalleeKind::Icc) {
                try {
                    UpdateResult upd =
                        update_successors(overlay_, n, lr_next.des);
                    f.icc_removed = std::move(upd.removed_base_edges);
                } catch (const UnknownTargetError& e) {
                    throw AbortSearch{e.what()};
                }
            }
            match_points_.emplace_back(index_, f.node);
            snapshots_.push_back(emu_);
            ++index_;
            deepest_ = std::max(deepest_, index_);
            f.matched_here = true;
            if (index_ == records_.size()) {
                capture_success();
                register_paths(1, f);
                return false; // complete path; probe continues via siblings
            }
        }
        return true;
    }

    void expand(Frame& f)
    {
        f.succ = successors(overlay_, f.node);
        f.next_succ = 0;
        f.expanded = true;
    }

    /// Pushes the next successor of f, adjusting the emulated stack per
    /// edge kind. Returns false when all successors are exhausted.
    bool step(Frame& f)
    {
        while (f.next_succ < f.succ.size()) {
            const Successor s = f.succ[f.next_succ++];
            Frame child;
            child.node = s.to;
            switch (s.kind) {
            case EdgeKind::Flow:
                child.via = 1;
                break;
            case EdgeKind::CallEnter: {
                if (f.climbing) {
                    continue; // no new descents while above the target
                }
                const Node& target = node_at(s.to);
                emu_.push(target.method.signature,
                          base_flow_successor(f.node), index_);
                child.via = 2;
                break;
            }
            case EdgeKind::Return: {
                if (emu_.size() <= 1) {
                    continue; // never pop the callback frame
                }
                const EmuStack::Frame& top = emu_.top();
                if (!top.return_to || *top.return_to != s.to) {
                    continue; // not the continuation of this activation
                }
                if (top.index_at_push >= index_) {
                    // Nothing matched inside this activation; such a
                    // descent is elided from paths, so it cannot return.
                    continue;
                }
                child.popped_frame = emu_.pop();
                child.via = 3;
                break;
            }
            }
            stack_.push_back(std::move(child));
            return true;
        }
        return false;
    }

    void search()
    {
        const std::optional<NodeId> entry = graph_.root_entry();
        if (!entry) {
            throw ContractError("match_segment: supergraph lacks a root "
                                "entry node");
        }
        emu_ = EmuStack(graph_.root_callback().signature);
        snapshots_.push_back(emu_);
        path_.push_back(*entry);
        match_points_.emplace_back(0, *entry);
        visits_ = 1; // the anchored callback entry

        if (records_.size() == 1) { // empty body
            capture_success();
            paths_found_ = 1;
            finalize_result();
            return;
        }

        Frame root;
        root.node = *entry;
        root.via = 0;
        root.on_path = false; // entry already on path_
        root.state_key = state_key(*entry);
        memo_.emplace(root.state_key, StateInfo{});
        root.pushed_state = true;
        expand(root);
        stack_.push_back(std::move(root));

        while (!stack_.empty() && !stop_) {
            Frame& f = stack_.back();
            if (!f.expanded) {
                if (enter(f)) {
                    expand(f);
                } else {
                    finalize_state(f);
                    unwind(f);
                    const uint64_t through = f.paths_through;
                    stack_.pop_back();
                    if (!stack_.empty() && through > 0) {
                        stack_.back().paths_through = saturating_add(
                            stack_.back().paths_through, through);
                    }
                    continue;
                }
            }
            if (!step(f)) {
                finalize_state(f);
                unwind(f);
                const uint64_t through = f.paths_through;
                stack_.pop_back();
                if (!stack_.empty() && through > 0) {
                    stack_.back().paths_through = saturating_add(
                        stack_.back().paths_through, through);
                }
            }
        }
        // Drain any frames left after an early stop so emu/path state is
        // not needed further (results were already captured).
        stack_.clear();
        finalize_result();
    }
};

PathSegment run_segment(const Supergraph& g, const AppModel& model,
                        const LogSegment& seg, const MatchConfig& cfg,
                        bool guided)
{
    SegmentMatcher matcher(g, model, seg, cfg, guided);
    return matcher.run();
}

} // namespace

PathSegment match_segment(const Supergraph& g, const AppModel& model,
                          const LogSegment& seg, const MatchConfig& cfg)
{
    return run_segment(g, model, seg, cfg, true);
}

PathSegment match_segment_backtracking(const Supergraph& g,
                                       const AppModel& model,
                                       const LogSegment& seg,
                                       const MatchConfig& cfg)
{
    return run_segment(g, model, seg, cfg, false);
}

CombinedPath combine(const std::vector<PathSegment>& segments)
{
    if (segments.empty()) {
        throw ContractError("combine: no segments");
    }
    for (const PathSegment& s : segments) {
        if (!s.ok) {
            throw ContractError("combine: segment " +
                                std::to_string(s.segment_index) +
                                " failed: " + s.error);
        }
    }
    CombinedPath path;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i > 0) {
            path.joins.emplace_back(segments[i - 1].nodes.back(),
                                    segments[i].nodes.front());
        }
        path.nodes.insert(path.nodes.end(), segments[i].nodes.begin(),
                          segments[i].nodes.end());
    }
    return path;
}

std::vector<NodeId> MatchReport::flattened_nodes() const
{
    std::vector<NodeId> out;
    for (const ThreadMatch& t : threads) {
        for (const PathSegment& s : t.results) {
            if (s.ok) {
                out.insert(out.end(), s.nodes.begin(), s.nodes.end());
            }
        }
    }
    return out;
}

MatchReport match_all(const AppModel& model, const LogSequence& log,
                      const MatchConfig& cfg)
{
    MatchReport report;
    report.strategy = cfg.strategy;

    if (log.records.empty()) {
        report.all_ok = true;
        report.diagnostics.push_back("log is empty");
        return report;
    }

    int64_t pid;
    if (cfg.pid) {
        pid = *cfg.pid;
    } else {
        pid = log.records.front().pid;
        report.diagnostics.push_back("pid not given; using pid " +
                                     std::to_string(pid) +
                                     " of the first record");
    }
    const LogSequence scoped = scope(log, pid);
    if (scoped.records.empty()) {
        report.all_ok = false;
        report.diagnostics.push_back("no records for pid " +
                                     std::to_string(pid));
        return report;
    }

    const std::vector<std::string>& prefixes =
        cfg.library_prefix_override ? *cfg.library_prefix_override
                                    : model.library_prefixes;
    std::vector<int64_t> no_caller;
    const LogSequence filtered =
        filter_library_records(scoped, prefixes, &no_caller);
    for (int64_t seq : no_caller) {
        report.diagnostics.push_back(
            "record seq " + std::to_string(seq) +
            " kept without caller evidence (empty window)");
    }

    struct Task {
        size_t thread_idx;
        size_t segment_idx;
        const LogSegment* segment;
    };
    std::vector<Task> tasks;

    for (const LogSequence& per_tid : partition_by_thread(filtered)) {
        ThreadMatch tm;
        tm.tid = per_tid.records.front().tid;
        Segmentation segs = segment(per_tid, model.callback_set);
        for (const LogRecord& rec : segs.prelude) {
            tm.prelude_seqs.push_back(rec.seq);
        }
        if (!segs.prelude.empty()) {
            report.diagnostics.push_back(
                "tid " + std::to_string(tm.tid) + ": " +
                std::to_string(segs.prelude.size()) +
                " records precede the first callback (reported as "
                "prelude)");
        }
        tm.segments = std::move(segs.segments);
        tm.results.resize(tm.segments.size());
        report.threads.push_back(std::move(tm));
    }
    for (size_t t = 0; t < report.threads.size(); ++t) {
        for (size_t s = 0; s < report.threads[t].segments.size(); ++s) {
            tasks.push_back({t, s, &report.threads[t].segments[s]});
        }
    }

    const auto run_task = [&](const Task& task) {
        PathSegment result;
        result.segment_index = task.segment_idx;
        const ApiSignature& cb = task.segment->callback.des.signature;
        const Supergraph* g = model.supergraph_for(cb);
        if (!g) {
            result.ok = false;
            result.error = "no supergraph for callback " + cb.canonical();
        } else {
            try {
                result = cfg.strategy == Strategy::Guided
                             ? match_segment(*g, model, *task.segment, cfg)
                             : match_segment_backtracking(
                                   *g, model, *task.segment, cfg);
                result.segment_index = task.segment_idx;
            } catch (const ContractError& e) {
                result.ok = false;
                result.error = e.what();
            }
        }
        report.threads[task.thread_idx].results[task.segment_idx] =
            std::move(result);
    };

    unsigned jobs = cfg.jobs;
    if (jobs == 0) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        jobs = static_cast<unsigned>(
            std::min<size_t>(tasks.size(), hw));
    }
    if (jobs <= 1 || tasks.size() <= 1) {
        for (const Task& task : tasks) {
            run_task(task);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                while (true) {
                    const size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) {
                        return;
                    }
                    run_task(tasks[i]);
                }
            });
        }
        for (std::thread& w : workers) {
            w.join();
        }
    }

    report.all_ok = true;
    for (ThreadMatch& tm : report.threads) {
        bool thread_ok = !tm.results.empty();
        for (const PathSegment& r : tm.results) {
            report.total_visited += r.visited;
            report.total_elapsed_ms += r.elapsed_ms;
            if (!r.ok) {
                thread_ok = false;
                report.all_ok = false;
                report.diagnostics.push_back(
                    "tid " + std::to_string(tm.tid) + " segment " +
                    std::to_string(r.segment_index) + ": " + r.error);
            }
        }
        if (thread_ok) {
            tm.joins = combine(tm.results).joins;
            tm.combined = true;
        }
    }
    return report;
}

} // namespace logpath
