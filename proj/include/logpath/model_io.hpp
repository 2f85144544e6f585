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

#ifndef LOGPATH_MODEL_IO_HPP
#define LOGPATH_MODEL_IO_HPP

#include <string>
#include <string_view>

#include "logpath/graph.hpp"

namespace logpath {

/// Parses and validates the app-model interchange JSON.
/// Throws ParseError (with line/column) on malformed syntax and
/// ValidationError naming the offending node/edge on invariant
/// violations.
AppModel load_app_model(std::string_view json_text);

/// Reads a model from a file path ("-" reads standard input).
AppModel load_app_model_file(const std::string& path);

/// Serializes a model to the interchange format. load(serialize(m)) is
/// structurally equal to m, including edge order.
std::string serialize_app_model(const AppModel& model);

} // namespace logpath

#endif
