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

#include "logpath/overhead.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logpath/errors.hpp"

namespace logpath {

using nlohmann::json;

std::vector<OverheadRow>
overhead_from_anchors(const std::vector<OverheadRow>& anchors)
{
    if (anchors.empty()) {
        throw ContractError("overhead: no anchor points");
    }
    std::vector<OverheadRow> sorted = anchors;
    std::sort(sorted.begin(), sorted.end(),
              [](const OverheadRow& a, const OverheadRow& b) {
                  return a.k < b.k;
              });
    std::vector<OverheadRow> rows;
    rows.push_back(sorted.front());
    for (size_t i = 1; i < sorted.size(); ++i) {
        const OverheadRow& lo = sorted[i - 1];
        const OverheadRow& hi = sorted[i];
        if (hi.k <= lo.k) {
            throw ContractError("overhead: anchor k values must be "
                                "strictly increasing");
        }
        for (int k = lo.k + 1; k <= hi.k; ++k) {
            const double t = static_cast<double>(k - lo.k) /
                             static_cast<double>(hi.k - lo.k);
            rows.push_back({k, lo.overhead +
                                   t * (hi.overhead - lo.overhead)});
        }
    }
    return rows;
}

std::vector<OverheadRow> load_overhead(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("overhead: JSON syntax error: ") +
                         e.what());
    }
    if (!doc.is_object() || !doc.contains("anchors")) {
        throw ParseError("overhead: expected {\"anchors\": [...]}");
    }
    std::vector<OverheadRow> anchors;
    for (const json& a : doc["anchors"]) {
        anchors.push_back({a.at("k").get<int>(),
                           a.at("overhead").get<double>()});
    }
    return overhead_from_anchors(anchors);
}

std::vector<OverheadRow> load_overhead_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open overhead file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_overhead(buf.str());
}

} // namespace logpath
