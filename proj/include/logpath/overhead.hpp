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

#ifndef LOGPATH_OVERHEAD_HPP
#define LOGPATH_OVERHEAD_HPP

#include <string>
#include <string_view>
#include <vector>

#include "logpath/simulator.hpp"

namespace logpath {

/// Expands anchor points into one row per integer k with linear
/// interpolation between consecutive anchors.
std::vector<OverheadRow>
overhead_from_anchors(const std::vector<OverheadRow>& anchors);

/// Loads {"anchors": [{"k": n, "overhead": x}, ...]} and interpolates.
std::vector<OverheadRow> load_overhead(std::string_view json_text);
std::vector<OverheadRow> load_overhead_file(const std::string& path);

} // namespace logpath

#endif
