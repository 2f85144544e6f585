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

#ifndef LOGPATH_SIMULATOR_HPP
#define LOGPATH_SIMULATOR_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logpath/graph.hpp"
#include "logpath/log.hpp"
#include "logpath/matcher.hpp"

namespace logpath {

/// Knobs for the synthetic app generator. Identical params produce a
/// byte-identical model.
struct GenParams {
    int node_budget = 500;
    double branch_fraction = 0.2;
    /// Fraction of ordinary framework call sites that hit the logged-API
    /// set. Reflective/ICC sites are always logged (their mechanism APIs
    /// are in the set).
    double logged_density = 0.1;
    /// Fraction of call sites that are reflective.
    double reflective_fraction = 0.2;
    int icc_links = 0;
    int max_call_depth = 4;
    int callbacks = 2;
    uint64_t seed = 1;
};

AppModel generate_app(const GenParams& params);

/// Execution scenario for the simulator.
struct ScenarioParams {
    uint64_t seed = 1;
    int k = 11;
    int threads = 1;
    /// OS frames below the app-level chain; only D-differences matter.
    int64_t base_offset = 7;
    /// Fraction of the final log that is injected library noise.
    double noise_fraction = 0.0;
    /// Callback activations per thread (ICC-triggered ones come extra).
    int activations_per_thread = 4;
    int64_t app_pid = 1001;
    /// When set, interleave this fraction of records from a second app.
    std::optional<int64_t> foreign_pid;
    double foreign_fraction = 0.0;
};

struct TruthSegment {
    ApiSignature callback;
    /// The walk, trimmed at the node of the last emitted record.
    std::vector<NodeId> nodes;
};

struct TruthThread {
    int64_t tid = 0;
    std::vector<TruthSegment> segments;
};

struct RecordTruth {
    int64_t seq = 0;
    int64_t tid = 0;
    bool library = false;
    bool foreign = false;
    /// Emulated chain length for app records (0 otherwise).
    int64_t depth = 0;
    std::vector<ApiSignature> window;
};

/// Everything the simulator knows about the run; the oracle the matcher
/// is verified against.
struct GroundTruth {
    int64_t app_pid = 0;
    int k = 0;
    int64_t base_offset = 0;
    std::vector<TruthThread> threads;
    std::vector<RecordTruth> records;
    size_t app_records = 0;
    size_t library_records = 0;
    size_t foreign_records = 0;

    std::vector<NodeId> flattened() const;
};

std::pair<LogSequence, GroundTruth> simulate(const AppModel& model,
                                             const ScenarioParams& scenario);

std::string serialize_truth(const GroundTruth& truth);
GroundTruth load_truth(std::string_view json_text);
GroundTruth load_truth_file(const std::string& path);

/// Combined generator + scenario config file.
struct SimulationParams {
    GenParams gen;
    ScenarioParams scenario;
};

SimulationParams load_simulation_params(std::string_view json_text);
SimulationParams load_simulation_params_file(const std::string& path);

/// One (k, coverage) row; rows appear at distinct realized depths.
struct CdfRow {
    int k = 0;
    double coverage = 0.0;
};

/// Cumulative coverage of logged-API call sites by entry-to-caller chain
/// depth (shortest chain when several reach a site).
std::vector<CdfRow> depth_cdf(const AppModel& model,
                              const std::set<ApiSignature>& logged);

/// Step lookup: coverage at the greatest tabulated depth <= k.
double coverage_at(const std::vector<CdfRow>& cdf, int k);

struct OverheadRow {
    int k = 0;
    double overhead = 0.0;
};

/// argmax_k coverage(k)/overhead(k) over the overhead table's k values;
/// ties break toward smaller k.
int select_k(const std::vector<CdfRow>& cdf,
             const std::vector<OverheadRow>& overhead);

/// Per-strategy outcome of one instance, Table-style.
struct StrategyOutcome {
    double time_sec = 0.0;
    uint64_t visited_nodes = 0;
    bool correct = false;
    bool ok = false;
};

struct ComparisonRow {
    size_t sum_logs = 0;
    size_t sum_nodes = 0;
    size_t sum_branch_nodes = 0;
    StrategyOutcome guided;
    StrategyOutcome backtracking;
};

/// Runs both strategies on the log and scores them against the truth.
ComparisonRow compare_strategies(const AppModel& model,
                                 const LogSequence& log,
                                 const GroundTruth& truth,
                                 const MatchConfig& base_cfg = {});

std::string comparison_csv_header();
std::string comparison_csv_row(const ComparisonRow& row);

/// Whether a report reproduces the truth walk exactly, per thread and
/// segment.
bool report_matches_truth(const MatchReport& report,
                          const GroundTruth& truth);

} // namespace logpath

#endif
