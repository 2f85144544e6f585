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

#include <algorithm>
#include <cmath>

#include "api_pool.hpp"
#include "logpath/errors.hpp"
#include "logpath/rng.hpp"
#include "logpath/validate.hpp"

namespace logpath::pool {

namespace {

std::vector<ApiSignature> parse_all(std::initializer_list<const char*> sigs)
{
    std::vector<ApiSignature> out;
    for (const char* s : sigs) {
        out.push_back(ApiSignature::parse(s));
    }
    return out;
}

} // namespace

const std::vector<ApiSignature>& logged_framework_apis()
{
    static const std::vector<ApiSignature> apis = parse_all({
        "android.telephony.TelephonyManager.getDeviceId()java.lang.String",
        "android.telephony.TelephonyManager.getSubscriberId()java.lang."
        "String",
        "android.telephony.TelephonyManager.getSimCountryIso()java.lang."
        "String",
        "android.location.LocationManager.getLastKnownLocation(java.lang."
        "String)android.location.Location",
        "android.accounts.AccountManager.getAccounts()[Landroid.accounts."
        "Account",
        "android.content.ContentResolver.query(android.net.Uri)android."
        "database.Cursor",
        "java.net.URL.openConnection()java.net.URLConnection",
        "java.net.HttpURLConnection.connect()void",
        "java.io.FileOutputStream.write([B)void",
        "java.io.FileInputStream.read([B)int",
        "android.hardware.Camera.open()android.hardware.Camera",
        "android.media.AudioRecord.startRecording()void",
        "android.net.wifi.WifiManager.getConnectionInfo()android.net.wifi."
        "WifiInfo",
        "android.database.sqlite.SQLiteDatabase.rawQuery(java.lang."
        "String)android.database.Cursor",
        "android.widget.EditText.getText()android.text.Editable",
        "java.lang.Runtime.exec(java.lang.String)java.lang.Process",
    });
    return apis;
}

const std::vector<ApiSignature>& unlogged_framework_apis()
{
    static const std::vector<ApiSignature> apis = parse_all({
        "java.lang.StringBuilder.append(java.lang.String)java.lang."
        "StringBuilder",
        "java.lang.String.length()int",
        "java.lang.String.substring(int)java.lang.String",
        "java.util.ArrayList.add(java.lang.Object)boolean",
        "java.util.HashMap.put(java.lang.Object,java.lang.Object)java.lang."
        "Object",
        "java.lang.Integer.parseInt(java.lang.String)int",
        "java.lang.System.currentTimeMillis()long",
        "java.util.Random.nextInt(int)int",
        "java.lang.Thread.sleep(long)void",
        "java.lang.Math.abs(int)int",
    });
    return apis;
}

const ApiSignature& reflect_api()
{
    static const ApiSignature api = ApiSignature::parse(
        "java.lang.reflect.Method.invoke(java.lang.Object,[Ljava.lang."
        "Object)java.lang.Object");
    return api;
}

const ApiSignature& icc_api()
{
    static const ApiSignature api = ApiSignature::parse(
        "android.content.Context.startActivity(android.content.Intent)"
        "void");
    return api;
}

const std::vector<ApiSignature>& reflective_target_pool()
{
    static const std::vector<ApiSignature> apis = parse_all({
        "android.telephony.SmsManager.sendTextMessage(java.lang.String,"
        "java.lang.String,java.lang.String)void",
        "java.lang.Runtime.loadLibrary(java.lang.String)void",
        "android.os.PowerManager.reboot(java.lang.String)void",
        "dalvik.system.DexClassLoader.loadClass(java.lang.String)java.lang."
        "Class",
        "android.content.pm.PackageManager.getInstalledPackages(int)java."
        "util.List",
        "android.telephony.gsm.SmsManager.getDefault()android.telephony."
        "gsm.SmsManager",
    });
    return apis;
}

const ApiSignature& decoy_api()
{
    static const ApiSignature api = ApiSignature::parse(
        "android.media.MediaRecorder.stop()void");
    return api;
}

const std::vector<std::string>& default_library_prefixes()
{
    static const std::vector<std::string> prefixes = {
        "android.app",  "android.os",        "android.view",
        "java.security", "java.lang.reflect", "dalvik.system",
    };
    return prefixes;
}

const std::vector<NoiseTemplate>& noise_templates()
{
    static const std::vector<NoiseTemplate> templates = {
        {ApiSignature::parse(
             "android.os.Handler.dispatchMessage(android.os.Message)void"),
         ApiSignature::parse("android.os.Looper.loop()void")},
        {ApiSignature::parse(
             "java.lang.Class.newInstance()java.lang.Object"),
         ApiSignature::parse(
             "android.view.LayoutInflater.inflate(int)android.view.View")},
        {ApiSignature::parse(
             "android.widget.EditText.getText()android.text.Editable"),
         ApiSignature::parse(
             "android.view.View.performClick()boolean")},
        {ApiSignature::parse(
             "java.security.MessageDigest.digest()[B"),
         ApiSignature::parse(
             "java.security.Signature.verify([B)boolean")},
        {ApiSignature::parse(
             "android.telephony.TelephonyManager.getDeviceId()java.lang."
             "String"),
         ApiSignature::parse(
             "android.app.ActivityThread.main([Ljava.lang.String)void")},
    };
    return templates;
}

} // namespace logpath::pool

namespace logpath {

namespace {

struct Element {
    enum class Kind : uint8_t {
        Plain,
        Site,       // one call node
        StaticCall, // call into a child method
        IccSite,    // icc call with guessed candidate links
        Decoy,      // branch: decoy-helper arm vs inline shared site
        Twin        // branch: inline shared site vs helper at depth+1
    };
    Kind kind = Kind::Plain;
    int skip_wraps = 0; // optional-skip branch nodes stacked before this
    CalleeKind callee = CalleeKind::Framework;
    ApiSignature api;    // Site: framework target
    size_t child = 0;    // StaticCall/Decoy/Twin: method-plan index
    ApiSignature shared; // Decoy/Twin: the arm-shared framework API
    bool shared_reflective = false;
};

struct MethodPlan {
    ApiSignature sig;
    int depth = 1;
    std::vector<Element> elements;
};

struct CallbackPlan {
    ApiSignature sig;
    std::vector<MethodPlan> methods; // [0] is the callback method
    bool tiny = false;
};

const char* kConditions[] = {
    "len(str) > 16",
    "flags & 0x4 != 0",
    "retries < limit",
    "msg.what == 7",
    "now - last > 48h",
};

class ModelBuilder {
public:
    ModelBuilder(const GenParams& params) : params_(params), rng_(params.seed)
    {
    }

    AppModel build()
    {
        check_params();
        plan();
        materialize();
        finish();
        return std::move(model_);
    }

private:
    const GenParams& params_;
    Rng rng_;
    AppModel model_;
    std::vector<CallbackPlan> plans_;
    NodeId next_id_ = 1;
    int branch_nodes_ = 0;
    int total_nodes_ = 0;
    size_t helper_counter_ = 0;
    // Materialized supergraphs, indexed like plans_.
    std::vector<Supergraph> graphs_;

    void check_params()
    {
        const GenParams& p = params_;
        if (p.node_budget < 4 || p.callbacks < 1 || p.max_call_depth < 1) {
            throw GenerationError("generate_app: budgets must be positive");
        }
        auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
        if (!frac(p.branch_fraction) || !frac(p.logged_density) ||
            !frac(p.reflective_fraction)) {
            throw GenerationError("generate_app: fractions must be in "
                                  "[0,1]");
        }
        if (p.icc_links > 0 && p.callbacks < 2) {
            throw GenerationError("generate_app: icc links need at least "
                                  "two callbacks");
        }
        if (p.icc_links > 0 && p.max_call_depth < 2) {
            throw GenerationError("generate_app: icc links need call "
                                  "depth for receiver copies");
        }
    }

    ApiSignature callback_sig(int i) const
    {
        static const char* events[] = {"onCreate", "onClick", "onResume",
                                       "onReceive", "onStart"};
        return ApiSignature("com.fix.ui.Screen" + std::to_string(i),
                            events[i % 5], "(android.os.Bundle)void");
    }

    ApiSignature helper_sig(int callback, size_t j)
    {
        return ApiSignature("com.fix.core.Logic" + std::to_string(callback),
                            "step" + std::to_string(j), "()void");
    }

    ApiSignature fresh_helper_sig()
    {
        return ApiSignature("com.fix.core.Helper" +
                                std::to_string(helper_counter_),
                            "run" + std::to_string(helper_counter_++),
                            "()void");
    }

    Element site_element()
    {
        Element e;
        e.kind = Element::Kind::Site;
        if (rng_.chance(params_.reflective_fraction)) {
            e.callee = CalleeKind::Reflective;
        } else {
            e.callee = CalleeKind::Framework;
            e.api = rng_.chance(params_.logged_density)
                        ? rng_.pick(pool::logged_framework_apis())
                        : rng_.pick(pool::unlogged_framework_apis());
        }
        return e;
    }

    /// A branch whose arms share one logged/reflective callsite. The
    /// pure twin (adversarial regime) lets a signature-only search
    /// complete through the wrong arm; the decoy variant plants a
    /// reserved API behind the shared site so such a search always
    /// diverges and has to come back.
    Element shared_arm_branch(CallbackPlan& plan, size_t host_method)
    {
        const bool pure_twin = params_.reflective_fraction >= 0.85;
        Element e;
        e.kind = pure_twin ? Element::Kind::Twin : Element::Kind::Decoy;
        e.shared_reflective = rng_.chance(params_.reflective_fraction);
        if (!e.shared_reflective) {
            e.shared = rng_.pick(pool::logged_framework_apis());
        }

        MethodPlan helper;
        helper.sig = fresh_helper_sig();
        helper.depth = plan.methods[host_method].depth + 1;
        Element shared_site;
        shared_site.kind = Element::Kind::Site;
        shared_site.callee = e.shared_reflective ? CalleeKind::Reflective
                                                 : CalleeKind::Framework;
        shared_site.api = e.shared;
        helper.elements.push_back(shared_site);
        if (!pure_twin) {
            Element decoy_site;
            decoy_site.kind = Element::Kind::Site;
            decoy_site.callee = CalleeKind::Framework;
            decoy_site.api = pool::decoy_api();
            helper.elements.push_back(decoy_site);
        }
        e.child = plan.methods.size();
        plan.methods.push_back(std::move(helper));
        return e;
    }

    void plan()
    {
        const int n_tiny =
            params_.icc_links > 0
                ? std::min(2, params_.callbacks - 1)
                : 0;
        const int n_normal = params_.callbacks - n_tiny;
        const int tiny_budget = 5;
        const int normal_share =
            std::max(4, (params_.node_budget - n_tiny * tiny_budget) /
                            std::max(1, n_normal));

        for (int i = 0; i < params_.callbacks; ++i) {
            CallbackPlan plan;
            plan.sig = callback_sig(i);
            plan.tiny = i >= n_normal;
            MethodPlan root;
            root.sig = plan.sig;
            root.depth = 1;
            plan.methods.push_back(std::move(root));
            if (plan.tiny) {
                Element e;
                e.kind = Element::Kind::Site;
                e.callee = CalleeKind::Framework;
                e.api = pool::logged_framework_apis()
                            [static_cast<size_t>(i) %
                             pool::logged_framework_apis().size()];
                plan.methods[0].elements.push_back(e);
                plans_.push_back(std::move(plan));
                continue;
            }

            plan_normal(plan, normal_share);
            plans_.push_back(std::move(plan));
        }

        // Distribute icc sites over normal callbacks.
        for (int link = 0; link < params_.icc_links; ++link) {
            const size_t owner = rng_.below(static_cast<uint64_t>(
                std::max(1, params_.callbacks - n_tiny)));
            CallbackPlan& plan = plans_[owner];
            Element e;
            e.kind = Element::Kind::IccSite;
            const size_t m = rng_.below(plan.methods.size());
            plan.methods[m].elements.push_back(e);
        }
    }

    void plan_normal(CallbackPlan& plan, int share)
    {
        const int n_methods = std::max(
            1, std::min(64, share / 16));
        for (int j = 1; j < n_methods; ++j) {
            MethodPlan helper;
            helper.sig = helper_sig(
                static_cast<int>(plans_.size()), static_cast<size_t>(j));
            // Parent with room below the depth cap; deeper parents make
            // longer chains for the depth analysis.
            std::vector<size_t> eligible;
            for (size_t p = 0; p < plan.methods.size(); ++p) {
                if (plan.methods[p].depth < params_.max_call_depth) {
                    eligible.push_back(p);
                }
            }
            const size_t parent =
                eligible.empty() ? 0 : eligible[rng_.below(eligible.size())];
            helper.depth = plan.methods[parent].depth + 1;
            Element call;
            call.kind = Element::Kind::StaticCall;
            call.child = plan.methods.size();
            plan.methods[parent].elements.push_back(call);
            plan.methods.push_back(std::move(helper));
        }

        const int skeleton = 2 * n_methods + (n_methods - 1);
        const int rest = std::max(0, share - skeleton);
        const int branch_target = static_cast<int>(
            std::lround(params_.branch_fraction * share));
        const bool pure_twin = params_.reflective_fraction >= 0.85;
        const int shared_cost = pure_twin ? 6 : 7;

        // Shared-arm branches are expensive; optional-skip branches cost
        // one node each and may stack in front of the same element.
        int shared_arms = std::min(branch_target / 3,
                                   std::max(0, rest - branch_target - 4) /
                                       (shared_cost - 1));
        if (params_.max_call_depth < 2) {
            shared_arms = 0;
        }
        int skips = branch_target - shared_arms;
        int chain = rest - shared_arms * shared_cost - skips;
        if (chain < 0) {
            const int give_back = std::min(skips, -chain);
            skips -= give_back;
            chain += give_back;
        }
        chain = std::max(chain, 0);

        auto host_for_shared = [&]() {
            std::vector<size_t> eligible;
            for (size_t m = 0; m < plan.methods.size(); ++m) {
                if (plan.methods[m].depth < params_.max_call_depth) {
                    eligible.push_back(m);
                }
            }
            return eligible.empty() ? size_t(0)
                                    : eligible[rng_.below(eligible.size())];
        };

        const size_t base_methods = plan.methods.size();
        for (int b = 0; b < shared_arms; ++b) {
            const size_t host = host_for_shared();
            Element e = shared_arm_branch(plan, host);
            plan.methods[host].elements.push_back(std::move(e));
        }
        for (int c = 0; c < chain; ++c) {
            Element e = rng_.chance(0.3) ? Element{} : site_element();
            const size_t m = rng_.below(base_methods);
            plan.methods[m].elements.push_back(std::move(e));
        }
        // Stack optional-skip branches onto elements, record-producing
        // sites first so most branches stay distinguishable.
        std::vector<std::pair<size_t, size_t>> sites;
        std::vector<std::pair<size_t, size_t>> rest_slots;
        for (size_t m = 0; m < base_methods; ++m) {
            for (size_t el = 0; el < plan.methods[m].elements.size(); ++el) {
                Element& e = plan.methods[m].elements[el];
                if (e.kind == Element::Kind::Decoy ||
                    e.kind == Element::Kind::Twin) {
                    continue;
                }
                const bool producing =
                    e.kind == Element::Kind::Site &&
                    (e.callee == CalleeKind::Reflective ||
                     model_logged(e.api));
                (producing ? sites : rest_slots).emplace_back(m, el);
            }
        }
        std::vector<std::pair<size_t, size_t>> slots = sites;
        slots.insert(slots.end(), rest_slots.begin(), rest_slots.end());
        if (slots.empty() && skips > 0) {
            Element filler; // nothing to wrap: host the branches on a stmt
            plan.methods[0].elements.push_back(filler);
            slots.emplace_back(0, plan.methods[0].elements.size() - 1);
        }
        for (int s = 0; s < skips; ++s) {
            const auto [m, el] = slots[static_cast<size_t>(s) %
                                       slots.size()];
            plan.methods[m].elements[el].skip_wraps += 1;
        }
    }

    bool model_logged(const ApiSignature& api) const
    {
        const auto& pool_ = pool::logged_framework_apis();
        return std::find(pool_.begin(), pool_.end(), api) != pool_.end() ||
               api == pool::decoy_api();
    }

    struct Piece {
        std::vector<Node> nodes;
        std::vector<Edge> edges;
    };

    Node make_node(const ApiSignature& method, Statement stmt)
    {
        Node n;
        n.id = next_id_++;
        n.method = {method, MethodOrigin::AppDefined};
        n.statement = std::move(stmt);
        return n;
    }

    /// Builds one method CFG right to left, so every element connects to
    /// the head of whatever follows it.
    void materialize_method(const CallbackPlan& plan, size_t method_idx,
                            Piece& out,
                            std::vector<std::pair<NodeId, size_t>>&
                                static_fixups,
                            std::unordered_map<size_t, std::pair<NodeId,
                                                                 NodeId>>&
                                bounds,
                            std::vector<NodeId>* icc_nodes)
    {
        const MethodPlan& mp = plan.methods[method_idx];
        Node entry = make_node(mp.sig, {StmtKind::Entry, "entry", {}});
        Node exit = make_node(mp.sig, {StmtKind::Exit, "exit", {}});

        std::vector<Node> body;
        std::vector<Edge> edges;
        NodeId next_head = exit.id;

        // Right-to-left: iterate elements in reverse.
        const auto& elems = mp.elements;
        for (size_t i = elems.size(); i-- > 0;) {
            const Element& e = elems[i];
            NodeId head = 0;
            switch (e.kind) {
            case Element::Kind::Plain: {
                Node n = make_node(mp.sig, {StmtKind::Plain, "stmt", {}});
                edges.push_back({n.id, next_head, EdgeKind::Flow});
                head = n.id;
                body.push_back(std::move(n));
                break;
            }
            case Element::Kind::Site: {
                Node n = make_site(mp.sig, e.callee, e.api);
                edges.push_back({n.id, next_head, EdgeKind::Flow});
                head = n.id;
                body.push_back(std::move(n));
                break;
            }
            case Element::Kind::StaticCall: {
                const ApiSignature& child = plan.methods[e.child].sig;
                Node n = make_node(
                    mp.sig,
                    {StmtKind::Call, child.canonical(),
                     CalleeRef{CalleeKind::Static, child}});
                edges.push_back({n.id, next_head, EdgeKind::Flow});
                static_fixups.emplace_back(n.id, e.child);
                head = n.id;
                body.push_back(std::move(n));
                break;
            }
            case Element::Kind::IccSite: {
                Node n = make_node(mp.sig,
                                   {StmtKind::Call,
                                    pool::icc_api().canonical(),
                                    CalleeRef{CalleeKind::Icc, {}}});
                edges.push_back({n.id, next_head, EdgeKind::Flow});
                if (icc_nodes) {
                    icc_nodes->push_back(n.id);
                }
                head = n.id;
                body.push_back(std::move(n));
                break;
            }
            case Element::Kind::Decoy:
            case Element::Kind::Twin: {
                // branch -> armA -> join, branch -> armB -> join
                Node branch = make_node(
                    mp.sig,
                    {StmtKind::Branch,
                     kConditions[rng_.below(5)], {}});
                Node inline_site =
                    make_site(mp.sig,
                              e.shared_reflective ? CalleeKind::Reflective
                                                  : CalleeKind::Framework,
                              e.shared);
                const ApiSignature& child = plan.methods[e.child].sig;
                Node helper_call = make_node(
                    mp.sig,
                    {StmtKind::Call, child.canonical(),
                     CalleeRef{CalleeKind::Static, child}});
                static_fixups.emplace_back(helper_call.id, e.child);
                if (e.kind == Element::Kind::Decoy) {
                    // Helper arm first: a wrong-arm search walks into the
                    // decoy and diverges there.
                    edges.push_back(
                        {branch.id, helper_call.id, EdgeKind::Flow});
                    edges.push_back(
                        {branch.id, inline_site.id, EdgeKind::Flow});
                } else {
                    // Inline arm first: a signature-only search takes it
                    // even when the runtime went through the helper.
                    edges.push_back(
                        {branch.id, inline_site.id, EdgeKind::Flow});
                    edges.push_back(
                        {branch.id, helper_call.id, EdgeKind::Flow});
                }
                edges.push_back({inline_site.id, next_head, EdgeKind::Flow});
                edges.push_back({helper_call.id, next_head, EdgeKind::Flow});
                head = branch.id;
                ++branch_nodes_;
                body.push_back(std::move(branch));
                body.push_back(std::move(inline_site));
                body.push_back(std::move(helper_call));
                break;
            }
            }
            for (int w = 0; w < e.skip_wraps; ++w) {
                Node branch = make_node(
                    mp.sig,
                    {StmtKind::Branch, kConditions[rng_.below(5)], {}});
                edges.push_back({branch.id, head, EdgeKind::Flow});
                edges.push_back({branch.id, next_head, EdgeKind::Flow});
                ++branch_nodes_;
                head = branch.id;
                body.push_back(std::move(branch));
            }
            next_head = head;
        }
        edges.push_back({entry.id, next_head, EdgeKind::Flow});

        bounds.emplace(method_idx, std::make_pair(entry.id, exit.id));
        out.nodes.push_back(std::move(entry));
        for (Node& n : body) {
            out.nodes.push_back(std::move(n));
        }
        out.nodes.push_back(std::move(exit));
        for (Edge& e : edges) {
            out.edges.push_back(e);
        }
    }

    Node make_site(const ApiSignature& method, CalleeKind kind,
                   const ApiSignature& api)
    {
        Statement stmt;
        stmt.kind = StmtKind::Call;
        switch (kind) {
        case CalleeKind::Reflective:
            stmt.display = pool::reflect_api().canonical();
            stmt.callee = CalleeRef{CalleeKind::Reflective, {}};
            break;
        case CalleeKind::Framework:
            stmt.display = api.canonical();
            stmt.callee = CalleeRef{CalleeKind::Framework, api};
            break;
        default:
            throw GenerationError("generate_app: bad site kind");
        }
        return make_node(method, std::move(stmt));
    }

    void materialize()
    {
        // Tiny (ICC receiver) callbacks first so their CFGs can be copied
        // as guessed candidates.
        std::vector<size_t> order;
        for (size_t i = 0; i < plans_.size(); ++i) {
            if (plans_[i].tiny) {
                order.push_back(i);
            }
        }
        std::vector<size_t> tiny_indices = order;
        for (size_t i = 0; i < plans_.size(); ++i) {
            if (!plans_[i].tiny) {
                order.push_back(i);
            }
        }

        graphs_.resize(plans_.size());
        for (size_t idx : order) {
            const CallbackPlan& plan = plans_[idx];
            Piece piece;
            std::vector<std::pair<NodeId, size_t>> static_fixups;
            std::unordered_map<size_t, std::pair<NodeId, NodeId>> bounds;
            std::vector<NodeId> icc_nodes;
            for (size_t m = 0; m < plan.methods.size(); ++m) {
                materialize_method(plan, m, piece, static_fixups, bounds,
                                   &icc_nodes);
            }
            // Call/return wiring for static calls.
            std::unordered_map<NodeId, NodeId> flow_succ;
            for (const Edge& e : piece.edges) {
                if (e.kind == EdgeKind::Flow) {
                    auto it = flow_succ.find(e.from);
                    if (it == flow_succ.end()) {
                        flow_succ.emplace(e.from, e.to);
                    }
                }
            }
            for (const auto& [call_node, child] : static_fixups) {
                const auto [centry, cexit] = bounds.at(child);
                piece.edges.push_back(
                    {call_node, centry, EdgeKind::CallEnter});
                piece.edges.push_back(
                    {cexit, flow_succ.at(call_node), EdgeKind::Return});
            }
            // Guessed ICC links: copy each receiver's CFG in and wire a
            // call edge from the icc site.
            for (NodeId icc : icc_nodes) {
                for (size_t t : tiny_indices) {
                    const Supergraph& src = graphs_[t];
                    std::unordered_map<NodeId, NodeId> remap;
                    for (const Node& n : src.nodes()) {
                        Node copy = n;
                        copy.id = next_id_++;
                        remap.emplace(n.id, copy.id);
                        piece.nodes.push_back(std::move(copy));
                    }
                    for (const Edge& e : src.edges()) {
                        piece.edges.push_back({remap.at(e.from),
                                               remap.at(e.to), e.kind});
                    }
                    piece.edges.push_back(
                        {icc, remap.at(*src.root_entry()),
                         EdgeKind::CallEnter});
                }
            }
            graphs_[idx] = Supergraph({plan.sig, MethodOrigin::AppDefined},
                                      std::move(piece.nodes),
                                      std::move(piece.edges));
        }
    }

    void finish()
    {
        for (size_t i = 0; i < plans_.size(); ++i) {
            model_.callback_registry.push_back(plans_[i].sig);
            model_.supergraphs.push_back(std::move(graphs_[i]));
        }
        for (const ApiSignature& api : pool::logged_framework_apis()) {
            model_.logged_apis.push_back(api);
        }
        model_.logged_apis.push_back(pool::decoy_api());
        model_.logged_apis.push_back(pool::reflect_api());
        model_.logged_apis.push_back(pool::icc_api());
        model_.library_prefixes = pool::default_library_prefixes();
        model_.rebuild_indices();

        const std::vector<std::string> problems = validate(model_);
        if (!problems.empty()) {
            throw GenerationError("generate_app: produced an invalid "
                                  "model: " +
                                  problems.front());
        }

        total_nodes_ = 0;
        for (const Supergraph& g : model_.supergraphs) {
            total_nodes_ += static_cast<int>(g.nodes().size());
        }
        const double node_dev =
            std::abs(total_nodes_ - params_.node_budget) /
            static_cast<double>(params_.node_budget);
        if (node_dev > 0.10) {
            throw GenerationError(
                "generate_app: realized " + std::to_string(total_nodes_) +
                " nodes for budget " +
                std::to_string(params_.node_budget));
        }
        const double branch_realized =
            static_cast<double>(branch_nodes_) / total_nodes_;
        if (std::abs(branch_realized - params_.branch_fraction) > 0.05) {
            throw GenerationError(
                "generate_app: realized branch fraction " +
                std::to_string(branch_realized) + " vs requested " +
                std::to_string(params_.branch_fraction));
        }
    }
};

} // namespace

AppModel generate_app(const GenParams& params)
{
    return ModelBuilder(params).build();
}

} // namespace logpath
