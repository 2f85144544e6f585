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

#ifndef LOGPATH_LOG_HPP
#define LOGPATH_LOG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logpath/signature.hpp"

namespace logpath {

/// Call-stack info attached to a log record: the deepest-K window of the
/// runtime stack (caller -> callee order) and the total frame count.
struct CallStackInfo {
    std::vector<ApiSignature> p;
    int64_t d = 0;
};

enum class SpecialKind : uint8_t { None, Reflective, Icc };

struct ReflectiveTarget {
    std::string unit;
    std::string method;
    std::string descriptor;

    ApiSignature signature() const
    {
        return ApiSignature(unit, method, descriptor);
    }
};

struct IccLink {
    std::string origin_component;
    std::string target_component;
};

/// The invoked API's description: signature, arguments, and the special
/// payload used to rebuild reflective/ICC call relations.
struct Des {
    ApiSignature signature;
    std::vector<std::string> args;
    SpecialKind special = SpecialKind::None;
    std::optional<ReflectiveTarget> reflective;
    std::optional<IccLink> icc;
};

struct LogRecord {
    int64_t pid = 0;
    int64_t tid = 0;
    Des des;
    CallStackInfo csi;
    /// Monotone sequence number standing in for the timestamp.
    int64_t seq = 0;
};

struct LogSequence {
    std::vector<LogRecord> records;
    int k = 0;
};

/// One callback record plus the non-callback records that follow it.
struct LogSegment {
    LogRecord callback;
    std::vector<LogRecord> body;
};

} // namespace logpath

#endif
