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

#ifndef LOGPATH_SIGNATURE_HPP
#define LOGPATH_SIGNATURE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace logpath {

/// A fully-qualified method signature in canonical string form
/// `unit.method(params)return`, e.g.
/// `android.telephony.TelephonyManager.getDeviceId()java.lang.String`.
///
/// Two signatures are equal iff their canonical strings are byte-equal.
/// The descriptor (everything from the first '(') is kept opaque apart
/// from being whitespace-free.
class ApiSignature {
public:
    ApiSignature() = default;

    /// Builds a signature from parts. Throws ParseError when a part is
    /// empty, contains whitespace, or the descriptor does not start
    /// with '('.
    ApiSignature(std::string declaring_unit, std::string method_name,
                 std::string descriptor);

    /// Parses the canonical string form. Throws ParseError on malformed
    /// input.
    static ApiSignature parse(std::string_view canonical);

    const std::string& declaring_unit() const { return declaring_unit_; }
    const std::string& method_name() const { return method_name_; }
    const std::string& descriptor() const { return descriptor_; }
    const std::string& canonical() const { return canonical_; }

    bool operator==(const ApiSignature& other) const
    {
        return canonical_ == other.canonical_;
    }
    bool operator!=(const ApiSignature& other) const
    {
        return !(*this == other);
    }
    bool operator<(const ApiSignature& other) const
    {
        return canonical_ < other.canonical_;
    }

private:
    std::string declaring_unit_;
    std::string method_name_;
    std::string descriptor_;
    std::string canonical_;
};

/// Where a method's code lives. AppDefined methods own a CFG inside some
/// supergraph; Framework methods never do.
enum class MethodOrigin : uint8_t { AppDefined, Framework };

struct MethodId {
    ApiSignature signature;
    MethodOrigin origin = MethodOrigin::AppDefined;

    bool operator==(const MethodId& other) const
    {
        return origin == other.origin && signature == other.signature;
    }
    bool operator!=(const MethodId& other) const { return !(*this == other); }
};

uint64_t stable_hash64(std::string_view s);

} // namespace logpath

template <> struct std::hash<logpath::ApiSignature> {
    size_t operator()(const logpath::ApiSignature& s) const
    {
        return std::hash<std::string>{}(s.canonical());
    }
};

#endif
