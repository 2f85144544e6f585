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

#ifndef LOGPATH_ERRORS_HPP
#define LOGPATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace logpath {

/// Malformed input bytes (JSON syntax, bad signature strings, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally well-formed input that violates a model/log invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what)
        : std::runtime_error(what)
    {
    }
};

/// An API precondition was violated by the caller.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what)
    {
    }
};

/// A dynamic update names a target that the model does not define.
class UnknownTargetError : public std::runtime_error {
public:
    explicit UnknownTargetError(const std::string& what)
        : std::runtime_error(what)
    {
    }
};

/// The synthetic-app generator could not satisfy the requested shape.
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what)
        : std::runtime_error(what)
    {
    }
};

} // namespace logpath

#endif
