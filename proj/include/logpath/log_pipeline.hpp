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

#ifndef LOGPATH_LOG_PIPELINE_HPP
#define LOGPATH_LOG_PIPELINE_HPP

#include <set>
#include <string>
#include <vector>

#include "logpath/log.hpp"

namespace logpath {

/// Keeps only records of one process; order preserved.
LogSequence scope(const LogSequence& seq, int64_t pid);

/// Removes records whose deepest frame's declaring unit starts with any
/// listed prefix. Records with an empty window are kept (no caller
/// evidence) and reported through `kept_without_caller` when non-null.
LogSequence filter_library_records(
    const LogSequence& seq, const std::vector<std::string>& prefixes,
    std::vector<int64_t>* kept_without_caller = nullptr);

/// True iff the record would be removed by filter_library_records.
bool is_library_record(const LogRecord& rec,
                       const std::vector<std::string>& prefixes);

/// One order-preserving sub-sequence per distinct tid, in order of first
/// appearance. Their union equals the input.
std::vector<LogSequence> partition_by_thread(const LogSequence& seq);

struct Segmentation {
    std::vector<LogSegment> segments;
    /// Records seen before the first callback record; reported, never
    /// silently dropped.
    std::vector<LogRecord> prelude;
};

/// Splits a single-pid, single-tid, library-filtered sequence into
/// per-callback segments.
Segmentation segment(const LogSequence& seq,
                     const std::set<ApiSignature>& callbacks);

} // namespace logpath

#endif
