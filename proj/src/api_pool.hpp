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

#ifndef LOGPATH_SRC_API_POOL_HPP
#define LOGPATH_SRC_API_POOL_HPP

#include <string>
#include <vector>

#include "logpath/signature.hpp"

namespace logpath::pool {

/// Framework APIs the synthetic apps may log (privacy-flavored picks).
const std::vector<ApiSignature>& logged_framework_apis();

/// Framework APIs that appear as callsites but are never logged.
const std::vector<ApiSignature>& unlogged_framework_apis();

/// The reflection mechanism API (always logged).
const ApiSignature& reflect_api();

/// The ICC mechanism API (always logged).
const ApiSignature& icc_api();

/// Framework methods reflective calls resolve to at runtime. Disjoint
/// from the logged pool so inserted explicit-invocation nodes never
/// shadow real matches.
const std::vector<ApiSignature>& reflective_target_pool();

/// Reserved logged API used only inside decoy arms; never appears in
/// ordinary chains, so a search that wanders into a decoy always
/// diverges here.
const ApiSignature& decoy_api();

/// Caller-class prefixes treated as library code.
const std::vector<std::string>& default_library_prefixes();

struct NoiseTemplate {
    ApiSignature api;
    ApiSignature caller; // deepest window frame; unit has a library prefix
};

/// dispatchMessage-style records injected as library noise.
const std::vector<NoiseTemplate>& noise_templates();

} // namespace logpath::pool

#endif
