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

#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "api_pool.hpp"
#include "logpath/errors.hpp"
#include "logpath/rng.hpp"
#include "logpath/validate.hpp"

namespace logpath {

using nlohmann::json;

namespace {

struct Pending {
    LogRecord rec; // seq assigned at the end
    RecordTruth meta;
};

std::vector<ApiSignature> window_of(const std::vector<ApiSignature>& chain,
                                    int k)
{
    const size_t len = chain.size();
    const size_t take = std::min<size_t>(static_cast<size_t>(k), len);
    return std::vector<ApiSignature>(chain.end() - static_cast<long>(take),
                                     chain.end());
}

class Simulation {
public:
    Simulation(const AppModel& model, const ScenarioParams& sc)
        : model_(model), sc_(sc), rng_(sc.seed)
    {
    }

    std::pair<LogSequence, GroundTruth> run()
    {
        if (sc_.k < 1) {
            throw ContractError("simulate: k must be >= 1");
        }
        if (sc_.noise_fraction < 0.0 || sc_.noise_fraction >= 1.0 ||
            sc_.foreign_fraction < 0.0 || sc_.foreign_fraction >= 1.0) {
            throw ContractError("simulate: fractions must be in [0,1)");
        }
        if (!validate(model_).empty()) {
            throw ContractError("simulate: model is invalid");
        }

        truth_.app_pid = sc_.app_pid;
        truth_.k = sc_.k;
        truth_.base_offset = sc_.base_offset;

        std::vector<std::vector<Pending>> per_thread;
        for (int t = 0; t < std::max(1, sc_.threads); ++t) {
            per_thread.push_back(run_thread(101 + t));
        }

        std::vector<Pending> merged = interleave(std::move(per_thread));
        truth_.app_records = merged.size();
        inject_noise(merged);
        inject_foreign(merged);

        LogSequence log;
        log.k = sc_.k;
        int64_t seq = 0;
        for (Pending& p : merged) {
            p.rec.seq = ++seq;
            p.meta.seq = p.rec.seq;
            truth_.records.push_back(p.meta);
            log.records.push_back(std::move(p.rec));
        }
        return {std::move(log), std::move(truth_)};
    }

private:
    const AppModel& model_;
    const ScenarioParams& sc_;
    Rng rng_;
    GroundTruth truth_;

    std::vector<Pending> run_thread(int64_t tid)
    {
        TruthThread thread_truth;
        thread_truth.tid = tid;
        std::vector<Pending> records;

        std::deque<size_t> queue;
        for (int a = 0; a < sc_.activations_per_thread; ++a) {
            queue.push_back(rng_.below(model_.supergraphs.size()));
        }
        const size_t activation_cap =
            static_cast<size_t>(sc_.activations_per_thread) * 3 + 8;
        size_t executed = 0;

        while (!queue.empty() && executed < activation_cap) {
            const size_t cb = queue.front();
            queue.pop_front();
            ++executed;
            walk_callback(cb, tid, records, thread_truth, queue);
        }
        truth_.threads.push_back(std::move(thread_truth));
        return records;
    }

    std::optional<NodeId> flow_successor(const Supergraph& g, NodeId id)
    {
        std::optional<NodeId> found;
        for (const Successor& s : successors(g, id)) {
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

    NodeId pick_flow_successor(const Supergraph& g, NodeId id)
    {
        std::vector<NodeId> flows;
        for (const Successor& s : successors(g, id)) {
            if (s.kind == EdgeKind::Flow) {
                flows.push_back(s.to);
            }
        }
        if (flows.empty()) {
            throw ContractError("simulate: node " + std::to_string(id) +
                                " has no flow successor");
        }
        return flows.size() == 1 ? flows[0]
                                 : flows[rng_.below(flows.size())];
    }

    void emit(std::vector<Pending>& records, int64_t tid, Des des,
              const std::vector<ApiSignature>& chain)
    {
        Pending p;
        p.rec.pid = sc_.app_pid;
        p.rec.tid = tid;
        p.rec.des = std::move(des);
        p.rec.csi.p = window_of(chain, sc_.k);
        p.rec.csi.d = sc_.base_offset + static_cast<int64_t>(chain.size());
        p.meta.tid = tid;
        p.meta.depth = static_cast<int64_t>(chain.size());
        p.meta.window = p.rec.csi.p;
        records.push_back(std::move(p));
    }

    void walk_callback(size_t cb_index, int64_t tid,
                       std::vector<Pending>& records,
                       TruthThread& thread_truth, std::deque<size_t>& queue)
    {
        const Supergraph& g = model_.supergraphs[cb_index];
        const ApiSignature& cb_sig = g.root_callback().signature;

        TruthSegment seg;
        seg.callback = cb_sig;
        std::vector<NodeId> walk;
        size_t last_emit_len = 0;

        std::vector<ApiSignature> chain{cb_sig};
        std::vector<NodeId> return_stack;
        NodeId cur = *g.root_entry();

        while (true) {
            walk.push_back(cur);
            const Node& n = *g.find_node(cur);
            switch (n.statement.kind) {
            case StmtKind::Entry: {
                if (walk.size() == 1) {
                    Des des;
                    des.signature = cb_sig;
                    emit(records, tid, std::move(des), chain);
                    last_emit_len = walk.size();
                }
                cur = pick_flow_successor(g, cur);
                break;
            }
            case StmtKind::Plain:
            case StmtKind::Branch:
                cur = pick_flow_successor(g, cur);
                break;
            case StmtKind::Exit: {
                if (return_stack.empty()) {
                    seg.nodes.assign(walk.begin(),
                                     walk.begin() +
                                         static_cast<long>(std::max<size_t>(
                                             last_emit_len, 1)));
                    thread_truth.segments.push_back(std::move(seg));
                    return;
                }
                cur = return_stack.back();
                return_stack.pop_back();
                chain.pop_back();
                break;
            }
            case StmtKind::Call: {
                const CalleeRef& callee = *n.statement.callee;
                switch (callee.kind) {
                case CalleeKind::Static: {
                    const std::optional<NodeId> ret =
                        flow_successor(g, cur);
                    if (!ret) {
                        throw ContractError(
                            "simulate: call node without unique flow "
                            "successor");
                    }
                    return_stack.push_back(*ret);
                    chain.push_back(*callee.target);
                    cur = *g.entry_of(*callee.target);
                    break;
                }
                case CalleeKind::Framework: {
                    if (model_.is_logged_api(*callee.target)) {
                        Des des;
                        des.signature = *callee.target;
                        emit(records, tid, std::move(des), chain);
                        last_emit_len = walk.size();
                    }
                    cur = pick_flow_successor(g, cur);
                    break;
                }
                case CalleeKind::Reflective: {
                    const ApiSignature& target =
                        rng_.pick(pool::reflective_target_pool());
                    Des des;
                    des.signature = pool::reflect_api();
                    des.args = {target.canonical()};
                    des.special = SpecialKind::Reflective;
                    des.reflective = ReflectiveTarget{
                        target.declaring_unit(), target.method_name(),
                        target.descriptor()};
                    emit(records, tid, std::move(des), chain);
                    last_emit_len = walk.size();
                    cur = pick_flow_successor(g, cur);
                    break;
                }
                case CalleeKind::Icc: {
                    const std::string target = pick_icc_target(g, cur);
                    Des des;
                    des.signature = pool::icc_api();
                    des.args = {target};
                    des.special = SpecialKind::Icc;
                    des.icc = IccLink{cb_sig.declaring_unit(), target};
                    emit(records, tid, std::move(des), chain);
                    last_emit_len = walk.size();
                    schedule_icc(target, queue);
                    cur = pick_flow_successor(g, cur);
                    break;
                }
                }
                break;
            }
            }
        }
    }

    std::string pick_icc_target(const Supergraph& g, NodeId icc_node)
    {
        std::vector<std::string> guessed;
        for (const Successor& s : successors(g, icc_node)) {
            if (s.kind == EdgeKind::CallEnter) {
                guessed.push_back(
                    g.find_node(s.to)->method.signature.declaring_unit());
            }
        }
        // Occasionally target a component static analysis did not guess.
        if (rng_.chance(0.25) || guessed.empty()) {
            std::vector<std::string> others;
            for (const ApiSignature& cb : model_.callback_registry) {
                const std::string& unit = cb.declaring_unit();
                if (unit != g.root_callback().signature.declaring_unit() &&
                    std::find(guessed.begin(), guessed.end(), unit) ==
                        guessed.end()) {
                    others.push_back(unit);
                }
            }
            if (!others.empty()) {
                return others[rng_.below(others.size())];
            }
        }
        if (guessed.empty()) {
            throw ContractError("simulate: icc site has no reachable "
                                "receiver");
        }
        return guessed[rng_.below(guessed.size())];
    }

    void schedule_icc(const std::string& unit, std::deque<size_t>& queue)
    {
        for (size_t i = 0; i < model_.supergraphs.size(); ++i) {
            if (model_.supergraphs[i]
                    .root_callback()
                    .signature.declaring_unit() == unit) {
                queue.push_back(i);
                return;
            }
        }
    }

    std::vector<Pending> interleave(std::vector<std::vector<Pending>> lists)
    {
        std::vector<Pending> merged;
        std::vector<size_t> cursor(lists.size(), 0);
        while (true) {
            std::vector<size_t> open;
            for (size_t i = 0; i < lists.size(); ++i) {
                if (cursor[i] < lists[i].size()) {
                    open.push_back(i);
                }
            }
            if (open.empty()) {
                break;
            }
            const size_t pick = open[rng_.below(open.size())];
            merged.push_back(std::move(lists[pick][cursor[pick]++]));
        }
        return merged;
    }

    void inject_noise(std::vector<Pending>& records)
    {
        if (sc_.noise_fraction <= 0.0 || records.empty()) {
            return;
        }
        const size_t count = static_cast<size_t>(std::llround(
            sc_.noise_fraction / (1.0 - sc_.noise_fraction) *
            static_cast<double>(records.size())));
        std::vector<int64_t> tids;
        for (int t = 0; t < std::max(1, sc_.threads); ++t) {
            tids.push_back(101 + t);
        }
        for (size_t i = 0; i < count; ++i) {
            const pool::NoiseTemplate& tpl =
                rng_.pick(pool::noise_templates());
            Pending p;
            p.rec.pid = sc_.app_pid;
            p.rec.tid = tids[rng_.below(tids.size())];
            p.rec.des.signature = tpl.api;
            p.rec.csi.p = {tpl.caller};
            p.rec.csi.d =
                sc_.base_offset + static_cast<int64_t>(rng_.range(1, 6));
            p.meta.tid = p.rec.tid;
            p.meta.library = true;
            const size_t pos = rng_.below(records.size() + 1);
            records.insert(records.begin() + static_cast<long>(pos),
                           std::move(p));
            ++truth_.library_records;
        }
    }

    void inject_foreign(std::vector<Pending>& records)
    {
        if (!sc_.foreign_pid || sc_.foreign_fraction <= 0.0 ||
            records.empty()) {
            return;
        }
        const size_t count = static_cast<size_t>(std::llround(
            sc_.foreign_fraction / (1.0 - sc_.foreign_fraction) *
            static_cast<double>(records.size())));
        const ApiSignature caller = ApiSignature(
            "com.other.app.Worker", "run", "()void");
        for (size_t i = 0; i < count; ++i) {
            Pending p;
            p.rec.pid = *sc_.foreign_pid;
            p.rec.tid = 900;
            p.rec.des.signature =
                rng_.pick(pool::logged_framework_apis());
            p.rec.csi.p = {caller};
            p.rec.csi.d =
                sc_.base_offset + static_cast<int64_t>(rng_.range(1, 4));
            p.meta.tid = p.rec.tid;
            p.meta.foreign = true;
            const size_t pos = rng_.below(records.size() + 1);
            records.insert(records.begin() + static_cast<long>(pos),
                           std::move(p));
            ++truth_.foreign_records;
        }
    }
};

} // namespace

std::vector<NodeId> GroundTruth::flattened() const
{
    std::vector<NodeId> out;
    for (const TruthThread& t : threads) {
        for (const TruthSegment& s : t.segments) {
            out.insert(out.end(), s.nodes.begin(), s.nodes.end());
        }
    }
    return out;
}

std::pair<LogSequence, GroundTruth> simulate(const AppModel& model,
                                             const ScenarioParams& scenario)
{
    return Simulation(model, scenario).run();
}

std::string serialize_truth(const GroundTruth& truth)
{
    json doc;
    doc["app_pid"] = truth.app_pid;
    doc["k"] = truth.k;
    doc["base_offset"] = truth.base_offset;
    json threads = json::array();
    for (const TruthThread& t : truth.threads) {
        json jt;
        jt["tid"] = t.tid;
        json segments = json::array();
        for (const TruthSegment& s : t.segments) {
            json js;
            js["callback"] = s.callback.canonical();
            js["nodes"] = s.nodes;
            segments.push_back(std::move(js));
        }
        jt["segments"] = std::move(segments);
        threads.push_back(std::move(jt));
    }
    doc["threads"] = std::move(threads);
    json records = json::array();
    for (const RecordTruth& r : truth.records) {
        json jr;
        jr["seq"] = r.seq;
        jr["tid"] = r.tid;
        jr["library"] = r.library;
        jr["foreign"] = r.foreign;
        jr["depth"] = r.depth;
        json window = json::array();
        for (const ApiSignature& w : r.window) {
            window.push_back(w.canonical());
        }
        jr["window"] = std::move(window);
        records.push_back(std::move(jr));
    }
    doc["records"] = std::move(records);
    doc["counts"] = {{"app", truth.app_records},
                     {"library", truth.library_records},
                     {"foreign", truth.foreign_records}};
    return doc.dump(2) + "\n";
}

GroundTruth load_truth(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("truth: JSON syntax error: ") +
                         e.what());
    }
    GroundTruth truth;
    truth.app_pid = doc.at("app_pid").get<int64_t>();
    truth.k = doc.at("k").get<int>();
    truth.base_offset = doc.at("base_offset").get<int64_t>();
    for (const json& jt : doc.at("threads")) {
        TruthThread t;
        t.tid = jt.at("tid").get<int64_t>();
        for (const json& js : jt.at("segments")) {
            TruthSegment s;
            s.callback = ApiSignature::parse(
                js.at("callback").get<std::string>());
            s.nodes = js.at("nodes").get<std::vector<NodeId>>();
            t.segments.push_back(std::move(s));
        }
        truth.threads.push_back(std::move(t));
    }
    for (const json& jr : doc.at("records")) {
        RecordTruth r;
        r.seq = jr.at("seq").get<int64_t>();
        r.tid = jr.at("tid").get<int64_t>();
        r.library = jr.at("library").get<bool>();
        r.foreign = jr.at("foreign").get<bool>();
        r.depth = jr.at("depth").get<int64_t>();
        for (const json& w : jr.at("window")) {
            r.window.push_back(ApiSignature::parse(w.get<std::string>()));
        }
        truth.records.push_back(std::move(r));
    }
    truth.app_records = doc.at("counts").at("app").get<size_t>();
    truth.library_records = doc.at("counts").at("library").get<size_t>();
    truth.foreign_records = doc.at("counts").at("foreign").get<size_t>();
    return truth;
}

GroundTruth load_truth_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open truth file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_truth(buf.str());
}

namespace {

void reject_unknown(const json& obj, const char* what,
                    std::initializer_list<const char*> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ParseError(std::string("params: unknown field '") +
                             it.key() + "' in " + what);
        }
    }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out)
{
    auto it = obj.find(key);
    if (it != obj.end() && !it->is_null()) {
        out = it->get<T>();
    }
}

} // namespace

SimulationParams load_simulation_params(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("params: JSON syntax error: ") +
                         e.what());
    }
    reject_unknown(doc, "params", {"gen", "scenario"});
    SimulationParams params;
    if (doc.contains("gen")) {
        const json& g = doc["gen"];
        reject_unknown(g, "gen",
                       {"node_budget", "branch_fraction", "logged_density",
                        "reflective_fraction", "icc_links",
                        "max_call_depth", "callbacks", "seed"});
        maybe(g, "node_budget", params.gen.node_budget);
        maybe(g, "branch_fraction", params.gen.branch_fraction);
        maybe(g, "logged_density", params.gen.logged_density);
        maybe(g, "reflective_fraction", params.gen.reflective_fraction);
        maybe(g, "icc_links", params.gen.icc_links);
        maybe(g, "max_call_depth", params.gen.max_call_depth);
        maybe(g, "callbacks", params.gen.callbacks);
        maybe(g, "seed", params.gen.seed);
    }
    if (doc.contains("scenario")) {
        const json& s = doc["scenario"];
        reject_unknown(s, "scenario",
                       {"seed", "k", "threads", "base_offset",
                        "noise_fraction", "activations", "app_pid",
                        "foreign_pid", "foreign_fraction"});
        maybe(s, "seed", params.scenario.seed);
        maybe(s, "k", params.scenario.k);
        maybe(s, "threads", params.scenario.threads);
        maybe(s, "base_offset", params.scenario.base_offset);
        maybe(s, "noise_fraction", params.scenario.noise_fraction);
        maybe(s, "activations", params.scenario.activations_per_thread);
        maybe(s, "app_pid", params.scenario.app_pid);
        if (s.contains("foreign_pid") && !s["foreign_pid"].is_null()) {
            params.scenario.foreign_pid =
                s["foreign_pid"].get<int64_t>();
        }
        maybe(s, "foreign_fraction", params.scenario.foreign_fraction);
    }
    return params;
}

SimulationParams load_simulation_params_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open params file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_simulation_params(buf.str());
}

} // namespace logpath
