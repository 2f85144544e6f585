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

#ifndef LOGPATH_LOG_IO_HPP
#define LOGPATH_LOG_IO_HPP

#include <string>
#include <string_view>

#include "logpath/log.hpp"

namespace logpath {

/// Parses the JSON-lines log format with the window size `k` in force.
/// Throws ParseError with the line number on malformed lines and
/// ValidationError when invariants fail (|p| > k, non-increasing seq).
LogSequence parse_log(std::string_view text, int k);

/// Reads a log from a path ("-" reads standard input).
LogSequence parse_log_file(const std::string& path, int k);

/// One JSON line per record, trailing newline included.
std::string serialize_log(const LogSequence& seq);

std::string serialize_record(const LogRecord& rec);

} // namespace logpath

#endif
