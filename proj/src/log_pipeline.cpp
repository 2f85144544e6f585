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

#include "logpath/log_pipeline.hpp"

#include <algorithm>

namespace logpath {

LogSequence scope(const LogSequence& seq, int64_t pid)
{
    LogSequence out;
    out.k = seq.k;
    for (const LogRecord& rec : seq.records) {
        if (rec.pid == pid) {
            out.records.push_back(rec);
        }
    }
    return out;
}

bool is_library_record(const LogRecord& rec,
                       const std::vector<std::string>& prefixes)
{
    if (rec.csi.p.empty()) {
        return false; // no caller evidence; keep
    }
    const std::string& caller = rec.csi.p.back().declaring_unit();
    return std::any_of(prefixes.begin(), prefixes.end(),
                       [&](const std::string& prefix) {
                           return caller.rfind(prefix, 0) == 0;
                       });
}

LogSequence filter_library_records(const LogSequence& seq,
                                   const std::vector<std::string>& prefixes,
                                   std::vector<int64_t>* kept_without_caller)
{
    LogSequence out;
    out.k = seq.k;
    for (const LogRecord& rec : seq.records) {
        if (rec.csi.p.empty() && kept_without_caller != nullptr) {
            kept_without_caller->push_back(rec.seq);
        }
        if (!is_library_record(rec, prefixes)) {
            out.records.push_back(rec);
        }
    }
    return out;
}

std::vector<LogSequence> partition_by_thread(const LogSequence& seq)
{
    std::vector<LogSequence> parts;
    std::vector<int64_t> tids;
    for (const LogRecord& rec : seq.records) {
        auto it = std::find(tids.begin(), tids.end(), rec.tid);
        size_t idx;
        if (it == tids.end()) {
            tids.push_back(rec.tid);
            parts.emplace_back();
            parts.back().k = seq.k;
            idx = parts.size() - 1;
        } else {
            idx = static_cast<size_t>(it - tids.begin());
        }
        parts[idx].records.push_back(rec);
    }
    return parts;
}

Segmentation segment(const LogSequence& seq,
                     const std::set<ApiSignature>& callbacks)
{
    Segmentation out;
    bool in_segment = false;
    for (const LogRecord& rec : seq.records) {
        if (callbacks.count(rec.des.signature) > 0) {
            LogSegment seg;
            seg.callback = rec;
            out.segments.push_back(std::move(seg));
            in_segment = true;
        } else if (in_segment) {
            out.segments.back().body.push_back(rec);
        } else {
            out.prelude.push_back(rec);
        }
    }
    return out;
}

} // namespace logpath
