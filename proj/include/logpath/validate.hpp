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

#ifndef LOGPATH_VALIDATE_HPP
#define LOGPATH_VALIDATE_HPP

#include <string>
#include <vector>

#include "logpath/graph.hpp"

namespace logpath {

/// Checks every structural invariant of the model. Returns one
/// human-readable diagnostic per violation; empty means valid.
std::vector<std::string> validate(const AppModel& model);

} // namespace logpath

#endif
