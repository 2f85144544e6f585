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

#include "logpath/model_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "logpath/errors.hpp"
#include "logpath/validate.hpp"

namespace logpath {

using nlohmann::json;

namespace {

std::string offset_to_line_col(std::string_view text, size_t byte_offset)
{
    size_t line = 1;
    size_t col = 1;
    for (size_t i = 0; i < byte_offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void reject_unknown_fields(const json& obj, const char* what,
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
            throw ParseError(std::string("model: unknown field '") +
                             it.key() + "' in " + what);
        }
    }
}

const json& require(const json& obj, const char* key, const char* what)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string("model: missing field '") + key +
                         "' in " + what);
    }
    return *it;
}

std::vector<ApiSignature> parse_signature_list(const json& arr,
                                               const char* what)
{
    if (!arr.is_array()) {
        throw ParseError(std::string("model: ") + what +
                         " must be an array of signature strings");
    }
    std::vector<ApiSignature> out;
    for (const json& item : arr) {
        if (!item.is_string()) {
            throw ParseError(std::string("model: ") + what +
                             " entries must be strings");
        }
        out.push_back(ApiSignature::parse(item.get<std::string>()));
    }
    return out;
}

StmtKind parse_stmt_kind(const std::string& s, NodeId id)
{
    if (s == "plain") return StmtKind::Plain;
    if (s == "branch") return StmtKind::Branch;
    if (s == "call") return StmtKind::Call;
    if (s == "entry") return StmtKind::Entry;
    if (s == "exit") return StmtKind::Exit;
    throw ParseError("model: node " + std::to_string(id) +
                     " has unknown kind '" + s + "'");
}

CalleeRef parse_callee(const json& obj, NodeId id)
{
    if (!obj.is_object()) {
        throw ParseError("model: node " + std::to_string(id) +
                         " callee must be an object");
    }
    reject_unknown_fields(obj, "callee", {"kind", "sig"});
    const std::string kind =
        require(obj, "kind", "callee").get<std::string>();
    CalleeRef ref;
    if (kind == "static") {
        ref.kind = CalleeKind::Static;
    } else if (kind == "framework") {
        ref.kind = CalleeKind::Framework;
    } else if (kind == "reflective") {
        ref.kind = CalleeKind::Reflective;
    } else if (kind == "icc") {
        ref.kind = CalleeKind::Icc;
    } else {
        throw ParseError("model: node " + std::to_string(id) +
                         " has unknown callee kind '" + kind + "'");
    }
    const bool wants_sig =
        ref.kind == CalleeKind::Static || ref.kind == CalleeKind::Framework;
    if (wants_sig) {
        ref.target = ApiSignature::parse(
            require(obj, "sig", "callee").get<std::string>());
    } else if (obj.contains("sig")) {
        throw ParseError("model: node " + std::to_string(id) +
                         " reflective/icc callee must not carry a static "
                         "target");
    }
    return ref;
}

Node parse_node(const json& obj)
{
    if (!obj.is_object()) {
        throw ParseError("model: node entries must be objects");
    }
    reject_unknown_fields(obj, "node",
                          {"id", "method", "kind", "display", "callee"});
    Node n;
    const json& id = require(obj, "id", "node");
    if (!id.is_number_integer()) {
        throw ParseError("model: node id must be an integer");
    }
    n.id = id.get<NodeId>();
    n.method.signature = ApiSignature::parse(
        require(obj, "method", "node").get<std::string>());
    n.method.origin = MethodOrigin::AppDefined;
    n.statement.kind =
        parse_stmt_kind(require(obj, "kind", "node").get<std::string>(),
                        n.id);
    n.statement.display =
        require(obj, "display", "node").get<std::string>();
    if (n.statement.kind == StmtKind::Call) {
        n.statement.callee = parse_callee(require(obj, "callee", "node"),
                                          n.id);
    } else if (obj.contains("callee")) {
        throw ParseError("model: node " + std::to_string(n.id) +
                         " is not a call but has a callee");
    }
    return n;
}

Edge parse_edge(const json& arr)
{
    if (!arr.is_array() || arr.size() != 3) {
        throw ParseError("model: edges must be [from, to, kind] triples");
    }
    Edge e;
    if (!arr[0].is_number_integer() || !arr[1].is_number_integer()) {
        throw ParseError("model: edge endpoints must be integers");
    }
    e.from = arr[0].get<NodeId>();
    e.to = arr[1].get<NodeId>();
    const std::string kind = arr[2].get<std::string>();
    if (kind == "flow") {
        e.kind = EdgeKind::Flow;
    } else if (kind == "call") {
        e.kind = EdgeKind::CallEnter;
    } else if (kind == "return") {
        e.kind = EdgeKind::Return;
    } else {
        throw ParseError("model: unknown edge kind '" + kind + "'");
    }
    return e;
}

json callee_to_json(const CalleeRef& ref)
{
    json obj;
    switch (ref.kind) {
    case CalleeKind::Static:
        obj["kind"] = "static";
        obj["sig"] = ref.target->canonical();
        break;
    case CalleeKind::Framework:
        obj["kind"] = "framework";
        obj["sig"] = ref.target->canonical();
        break;
    case CalleeKind::Reflective:
        obj["kind"] = "reflective";
        break;
    case CalleeKind::Icc:
        obj["kind"] = "icc";
        break;
    }
    return obj;
}

} // namespace

AppModel load_app_model(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("model: JSON syntax error at " +
                         offset_to_line_col(json_text, e.byte) + ": " +
                         e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("model: top level must be an object");
    }
    reject_unknown_fields(
        doc, "model",
        {"callbacks", "logged_apis", "library_prefixes", "supergraphs"});

    AppModel model;
    model.callback_registry =
        parse_signature_list(require(doc, "callbacks", "model"), "callbacks");
    model.logged_apis = parse_signature_list(
        require(doc, "logged_apis", "model"), "logged_apis");
    const json& prefixes = require(doc, "library_prefixes", "model");
    if (!prefixes.is_array()) {
        throw ParseError("model: library_prefixes must be an array");
    }
    for (const json& p : prefixes) {
        model.library_prefixes.push_back(p.get<std::string>());
    }

    const json& graphs = require(doc, "supergraphs", "model");
    if (!graphs.is_array()) {
        throw ParseError("model: supergraphs must be an array");
    }
    for (const json& g : graphs) {
        if (!g.is_object()) {
            throw ParseError("model: supergraph entries must be objects");
        }
        reject_unknown_fields(g, "supergraph", {"root", "nodes", "edges"});
        MethodId root;
        root.signature = ApiSignature::parse(
            require(g, "root", "supergraph").get<std::string>());
        root.origin = MethodOrigin::AppDefined;

        std::vector<Node> nodes;
        for (const json& n : require(g, "nodes", "supergraph")) {
            nodes.push_back(parse_node(n));
        }
        std::vector<Edge> edges;
        for (const json& e : require(g, "edges", "supergraph")) {
            edges.push_back(parse_edge(e));
        }
        model.supergraphs.emplace_back(std::move(root), std::move(nodes),
                                       std::move(edges));
    }

    model.rebuild_indices();

    const std::vector<std::string> problems = validate(model);
    if (!problems.empty()) {
        std::string joined = problems.front();
        for (size_t i = 1; i < problems.size(); ++i) {
            joined += "; " + problems[i];
        }
        throw ValidationError("model: " + joined);
    }
    return model;
}

AppModel load_app_model_file(const std::string& path)
{
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ParseError("cannot open model file '" + path + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return load_app_model(text);
}

std::string serialize_app_model(const AppModel& model)
{
    json doc;
    json callbacks = json::array();
    for (const ApiSignature& s : model.callback_registry) {
        callbacks.push_back(s.canonical());
    }
    doc["callbacks"] = std::move(callbacks);

    json logged = json::array();
    for (const ApiSignature& s : model.logged_apis) {
        logged.push_back(s.canonical());
    }
    doc["logged_apis"] = std::move(logged);

    doc["library_prefixes"] = model.library_prefixes;

    json graphs = json::array();
    for (const Supergraph& g : model.supergraphs) {
        json jg;
        jg["root"] = g.root_callback().signature.canonical();
        json nodes = json::array();
        for (const Node& n : g.nodes()) {
            json jn;
            jn["id"] = n.id;
            jn["method"] = n.method.signature.canonical();
            jn["kind"] = stmt_kind_name(n.statement.kind);
            jn["display"] = n.statement.display;
            if (n.statement.callee) {
                jn["callee"] = callee_to_json(*n.statement.callee);
            }
            nodes.push_back(std::move(jn));
        }
        jg["nodes"] = std::move(nodes);
        json edges = json::array();
        for (const Edge& e : g.edges()) {
            edges.push_back(json::array(
                {e.from, e.to, edge_kind_name(e.kind)}));
        }
        jg["edges"] = std::move(edges);
        graphs.push_back(std::move(jg));
    }
    doc["supergraphs"] = std::move(graphs);
    return doc.dump(2) + "\n";
}

} // namespace logpath
