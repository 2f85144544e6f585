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

#include "logpath/log_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "logpath/errors.hpp"

namespace logpath {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& obj, const char* what, size_t line,
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
            throw ParseError("log line " + std::to_string(line) +
                             ": unknown field '" + it.key() + "' in " +
                             what);
        }
    }
}

const json& require(const json& obj, const char* key, const char* what,
                    size_t line)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError("log line " + std::to_string(line) +
                         ": missing field '" + key + "' in " + what);
    }
    return *it;
}

LogRecord parse_record_json(const json& obj, size_t line)
{
    if (!obj.is_object()) {
        throw ParseError("log line " + std::to_string(line) +
                         ": record must be an object");
    }
    reject_unknown_fields(obj, "record", line,
                          {"seq", "pid", "tid", "des", "csi"});
    LogRecord rec;
    rec.seq = require(obj, "seq", "record", line).get<int64_t>();
    rec.pid = require(obj, "pid", "record", line).get<int64_t>();
    rec.tid = require(obj, "tid", "record", line).get<int64_t>();

    const json& des = require(obj, "des", "record", line);
    reject_unknown_fields(des, "des", line, {"sig", "args", "special"});
    rec.des.signature = ApiSignature::parse(
        require(des, "sig", "des", line).get<std::string>());
    for (const json& a : require(des, "args", "des", line)) {
        rec.des.args.push_back(a.get<std::string>());
    }
    const json& special = require(des, "special", "des", line);
    if (special.is_null()) {
        rec.des.special = SpecialKind::None;
    } else if (special.is_object()) {
        const std::string kind =
            require(special, "kind", "special", line).get<std::string>();
        if (kind == "reflective") {
            reject_unknown_fields(special, "special", line,
                                  {"kind", "unit", "method", "desc"});
            ReflectiveTarget t;
            t.unit = require(special, "unit", "special", line)
                         .get<std::string>();
            t.method = require(special, "method", "special", line)
                           .get<std::string>();
            t.descriptor = require(special, "desc", "special", line)
                               .get<std::string>();
            if (t.unit.empty() || t.method.empty() || t.descriptor.empty()) {
                throw ValidationError(
                    "log line " + std::to_string(line) +
                    ": reflective target fields must be non-empty");
            }
            rec.des.special = SpecialKind::Reflective;
            rec.des.reflective = std::move(t);
        } else if (kind == "icc") {
            reject_unknown_fields(special, "special", line,
                                  {"kind", "origin", "target"});
            IccLink link;
            link.origin_component =
                require(special, "origin", "special", line)
                    .get<std::string>();
            link.target_component =
                require(special, "target", "special", line)
                    .get<std::string>();
            if (link.origin_component.empty() ||
                link.target_component.empty()) {
                throw ValidationError(
                    "log line " + std::to_string(line) +
                    ": icc component fields must be non-empty");
            }
            rec.des.special = SpecialKind::Icc;
            rec.des.icc = std::move(link);
        } else {
            throw ParseError("log line " + std::to_string(line) +
                             ": unknown special kind '" + kind + "'");
        }
    } else {
        throw ParseError("log line " + std::to_string(line) +
                         ": special must be null or an object");
    }

    const json& csi = require(obj, "csi", "record", line);
    reject_unknown_fields(csi, "csi", line, {"p", "d"});
    for (const json& frame : require(csi, "p", "csi", line)) {
        rec.csi.p.push_back(ApiSignature::parse(frame.get<std::string>()));
    }
    rec.csi.d = require(csi, "d", "csi", line).get<int64_t>();
    if (rec.csi.d < 0) {
        throw ValidationError("log line " + std::to_string(line) +
                              ": stack depth d must be non-negative");
    }
    return rec;
}

} // namespace

LogSequence parse_log(std::string_view text, int k)
{
    if (k < 1) {
        throw ContractError("parse_log: k must be >= 1");
    }
    LogSequence seq;
    seq.k = k;

    size_t line_no = 0;
    size_t pos = 0;
    int64_t last_seq = 0;
    bool have_last = false;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() ||
            line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("log line " + std::to_string(line_no) +
                             ": JSON syntax error: " + e.what());
        }
        LogRecord rec = parse_record_json(obj, line_no);
        if (static_cast<int>(rec.csi.p.size()) > k) {
            throw ValidationError(
                "log line " + std::to_string(line_no) + ": |p| = " +
                std::to_string(rec.csi.p.size()) + " exceeds k = " +
                std::to_string(k));
        }
        if (have_last && rec.seq <= last_seq) {
            throw ValidationError("log line " + std::to_string(line_no) +
                                  ": seq " + std::to_string(rec.seq) +
                                  " does not increase");
        }
        last_seq = rec.seq;
        have_last = true;
        seq.records.push_back(std::move(rec));
    }
    return seq;
}

LogSequence parse_log_file(const std::string& path, int k)
{
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ParseError("cannot open log file '" + path + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_log(text, k);
}

std::string serialize_record(const LogRecord& rec)
{
    json obj;
    obj["seq"] = rec.seq;
    obj["pid"] = rec.pid;
    obj["tid"] = rec.tid;
    json des;
    des["sig"] = rec.des.signature.canonical();
    des["args"] = rec.des.args;
    switch (rec.des.special) {
    case SpecialKind::None:
        des["special"] = nullptr;
        break;
    case SpecialKind::Reflective:
        des["special"] = {{"kind", "reflective"},
                          {"unit", rec.des.reflective->unit},
                          {"method", rec.des.reflective->method},
                          {"desc", rec.des.reflective->descriptor}};
        break;
    case SpecialKind::Icc:
        des["special"] = {{"kind", "icc"},
                          {"origin", rec.des.icc->origin_component},
                          {"target", rec.des.icc->target_component}};
        break;
    }
    obj["des"] = std::move(des);
    json csi;
    json frames = json::array();
    for (const ApiSignature& f : rec.csi.p) {
        frames.push_back(f.canonical());
    }
    csi["p"] = std::move(frames);
    csi["d"] = rec.csi.d;
    obj["csi"] = std::move(csi);
    return obj.dump();
}

std::string serialize_log(const LogSequence& seq)
{
    std::string out;
    for (const LogRecord& rec : seq.records) {
        out += serialize_record(rec);
        out += '\n';
    }
    return out;
}

} // namespace logpath
