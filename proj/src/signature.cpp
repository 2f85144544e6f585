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

#include "logpath/signature.hpp"

#include <algorithm>
#include <cctype>

#include "logpath/errors.hpp"

namespace logpath {

namespace {

bool has_whitespace(std::string_view s)
{
    return std::any_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
}

} // namespace

ApiSignature::ApiSignature(std::string declaring_unit, std::string method_name,
                           std::string descriptor)
    : declaring_unit_(std::move(declaring_unit)),
      method_name_(std::move(method_name)), descriptor_(std::move(descriptor))
{
    if (declaring_unit_.empty() || method_name_.empty()) {
        throw ParseError("signature: declaring unit and method name must be "
                         "non-empty");
    }
    if (descriptor_.empty() || descriptor_.front() != '(') {
        throw ParseError("signature: descriptor must start with '(' in '" +
                         declaring_unit_ + "." + method_name_ + "'");
    }
    if (has_whitespace(declaring_unit_) || has_whitespace(method_name_) ||
        has_whitespace(descriptor_)) {
        throw ParseError("signature: whitespace is not allowed in '" +
                         declaring_unit_ + "." + method_name_ + descriptor_ +
                         "'");
    }
    if (method_name_.find('.') != std::string::npos ||
        method_name_.find('(') != std::string::npos) {
        throw ParseError("signature: method name '" + method_name_ +
                         "' contains a separator character");
    }
    canonical_ = declaring_unit_ + "." + method_name_ + descriptor_;
}

ApiSignature ApiSignature::parse(std::string_view canonical)
{
    const auto paren = canonical.find('(');
    if (paren == std::string_view::npos) {
        throw ParseError("signature '" + std::string(canonical) +
                         "': missing '(' descriptor");
    }
    const std::string_view prefix = canonical.substr(0, paren);
    const auto dot = prefix.rfind('.');
    if (dot == std::string_view::npos) {
        throw ParseError("signature '" + std::string(canonical) +
                         "': missing '.' between unit and method");
    }
    return ApiSignature(std::string(prefix.substr(0, dot)),
                        std::string(prefix.substr(dot + 1)),
                        std::string(canonical.substr(paren)));
}

uint64_t stable_hash64(std::string_view s)
{
    // FNV-1a, fixed across platforms.
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace logpath
