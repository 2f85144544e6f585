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

#ifndef LOGPATH_REPORT_IO_HPP
#define LOGPATH_REPORT_IO_HPP

#include <string>

#include "logpath/matcher.hpp"

namespace logpath {

/// Match report as canonical JSON. Timing lives in "elapsed_ms" fields
/// only, so determinism checks can strip them.
std::string serialize_report(const MatchReport& report,
                             const AppModel& model);

/// DOT rendering of the matched paths: match points filled gray, edges
/// taken from the overlay dashed, segment joins dotted.
std::string report_to_dot(const MatchReport& report, const AppModel& model);

} // namespace logpath

#endif
