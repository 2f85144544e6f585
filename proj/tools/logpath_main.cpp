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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "logpath/errors.hpp"
#include "logpath/log_io.hpp"
#include "logpath/log_pipeline.hpp"
#include "logpath/matcher.hpp"
#include "logpath/model_io.hpp"
#include "logpath/overhead.hpp"
#include "logpath/report_io.hpp"
#include "logpath/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitInputError = 2;

void write_output(const std::string& path, const std::string& content,
                  bool allow_stdout = false)
{
    if (path == "-" && allow_stdout) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw logpath::ParseError("cannot open output file '" + path + "'");
    }
    out << content;
}

std::vector<std::string> read_prefix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw logpath::ParseError("cannot open prefix file '" + path + "'");
    }
    std::vector<std::string> prefixes;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (!line.empty()) {
            prefixes.push_back(line);
        }
    }
    return prefixes;
}

struct MatchArgs {
    std::string graph_path;
    std::string log_path;
    std::string out_path = "report.json";
    std::string strategy = "guided";
    std::string prefixes_path;
    std::string dot_path;
    int k = 11;
    int64_t pid = -1;
    bool pid_set = false;
    uint64_t all_paths = 0;
    bool strict = false;
    unsigned jobs = 0;
};

int run_match(const MatchArgs& args)
{
    const logpath::AppModel model =
        logpath::load_app_model_file(args.graph_path);
    const logpath::LogSequence log =
        logpath::parse_log_file(args.log_path, args.k);

    logpath::MatchConfig cfg;
    cfg.strategy = args.strategy == "backtracking"
                       ? logpath::Strategy::Backtracking
                       : logpath::Strategy::Guided;
    if (args.pid_set) {
        cfg.pid = args.pid;
    }
    if (!args.prefixes_path.empty()) {
        cfg.library_prefix_override = read_prefix_file(args.prefixes_path);
    }
    if (args.all_paths > 0) {
        cfg.enumerate_all = true;
        cfg.max_paths = args.all_paths;
    }
    cfg.jobs = args.jobs;

    const logpath::MatchReport report = logpath::match_all(model, log, cfg);
    write_output(args.out_path, logpath::serialize_report(report, model));
    if (!args.dot_path.empty()) {
        write_output(args.dot_path, logpath::report_to_dot(report, model));
    }

    bool ambiguous = false;
    for (const logpath::ThreadMatch& t : report.threads) {
        size_t ok = 0;
        uint64_t visited = 0;
        double elapsed = 0.0;
        for (const logpath::PathSegment& s : t.results) {
            ok += s.ok ? 1 : 0;
            visited += s.visited;
            elapsed += s.elapsed_ms;
            ambiguous = ambiguous || s.ambiguous;
        }
        std::cout << "tid " << t.tid << ": segments " << ok << "/"
                  << t.results.size() << " matched, visited " << visited
                  << ", elapsed " << elapsed << " ms\n";
    }
    if (!report.all_ok) {
        for (const std::string& d : report.diagnostics) {
            std::cerr << d << "\n";
        }
        return kExitNoMatch;
    }
    if (args.strict && ambiguous) {
        std::cerr << "ambiguous match (strict mode)\n";
        return kExitNoMatch;
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string params_path;
    std::string log_path = "trace.jsonl";
    std::string truth_path = "truth.json";
    std::string model_path;
    uint64_t seed = 0;
    bool seed_set = false;
    int k = 0;
    int threads = 0;
};

int run_simulate(const SimulateArgs& args)
{
    logpath::SimulationParams params =
        logpath::load_simulation_params_file(args.params_path);
    if (args.seed_set) {
        params.scenario.seed = args.seed;
    }
    if (args.k > 0) {
        params.scenario.k = args.k;
    }
    if (args.threads > 0) {
        params.scenario.threads = args.threads;
    }
    const logpath::AppModel model = logpath::generate_app(params.gen);
    const auto [log, truth] = logpath::simulate(model, params.scenario);
    write_output(args.log_path, logpath::serialize_log(log), true);
    write_output(args.truth_path, logpath::serialize_truth(truth));
    if (!args.model_path.empty()) {
        write_output(args.model_path, logpath::serialize_app_model(model));
    }
    std::cout << "records " << log.records.size() << " (app "
              << truth.app_records << ", library " << truth.library_records
              << ", foreign " << truth.foreign_records << "), threads "
              << truth.threads.size() << "\n";
    return kExitOk;
}

struct GenerateArgs {
    std::string params_path;
    std::string out_path = "model.json";
};

int run_generate(const GenerateArgs& args)
{
    const logpath::SimulationParams params =
        logpath::load_simulation_params_file(args.params_path);
    const logpath::AppModel model = logpath::generate_app(params.gen);
    write_output(args.out_path, logpath::serialize_app_model(model));
    size_t nodes = 0;
    for (const logpath::Supergraph& g : model.supergraphs) {
        nodes += g.nodes().size();
    }
    std::cout << "model: " << model.supergraphs.size() << " supergraphs, "
              << nodes << " nodes\n";
    return kExitOk;
}

struct AnalyzeArgs {
    std::string graph_path;
    std::string overhead_path;
    std::string out_path = "cdf.csv";
};

int run_analyze(const AnalyzeArgs& args)
{
    const logpath::AppModel model =
        logpath::load_app_model_file(args.graph_path);
    const std::vector<logpath::OverheadRow> overhead =
        logpath::load_overhead_file(args.overhead_path);
    const std::vector<logpath::CdfRow> cdf =
        logpath::depth_cdf(model, model.logged_api_set);
    if (cdf.empty()) {
        std::cerr << "no logged callsites in the model\n";
        return kExitInputError;
    }
    if (cdf.back().k > overhead.back().k) {
        std::cerr << "table range mismatch: deepest callsite at k = "
                  << cdf.back().k << " but overhead table ends at k = "
                  << overhead.back().k << "\n";
        return kExitInputError;
    }
    std::ostringstream csv;
    csv << "k,coverage\n";
    for (const logpath::CdfRow& row : cdf) {
        csv << row.k << ',' << row.coverage << '\n';
    }
    write_output(args.out_path, csv.str(), true);
    std::cout << "selected K = " << logpath::select_k(cdf, overhead)
              << "\n";
    return kExitOk;
}

struct CompareArgs {
    std::string graph_path;
    std::string log_path;
    std::string truth_path;
    std::string out_path = "comparison.csv";
    int k = 11;
};

int run_compare(const CompareArgs& args)
{
    const logpath::AppModel model =
        logpath::load_app_model_file(args.graph_path);
    const logpath::LogSequence log =
        logpath::parse_log_file(args.log_path, args.k);
    const logpath::GroundTruth truth =
        logpath::load_truth_file(args.truth_path);
    if (truth.k != args.k) {
        std::cerr << "truth file k = " << truth.k
                  << " does not match --k = " << args.k << "\n";
        return kExitInputError;
    }
    const logpath::ComparisonRow row =
        logpath::compare_strategies(model, log, truth);
    const std::string csv = logpath::comparison_csv_header() + "\n" +
                            logpath::comparison_csv_row(row) + "\n";
    write_output(args.out_path, csv, true);
    std::cout << csv;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reconstructs execution paths through control-flow "
                 "supergraphs from API-level audit logs"};
    app.require_subcommand(1);

    MatchArgs match_args;
    CLI::App* match = app.add_subcommand(
        "match", "Match a log against an app model");
    match->add_option("-g,--graph", match_args.graph_path, "App model JSON")
        ->required();
    match->add_option("-l,--log", match_args.log_path,
                      "Audit log (JSON lines, '-' for stdin)")
        ->required();
    match->add_option("-o,--out", match_args.out_path, "Report JSON path");
    match->add_option("--strategy", match_args.strategy,
                      "guided or backtracking")
        ->check(CLI::IsMember({"guided", "backtracking"}));
    match->add_option("--k", match_args.k, "Window size in force");
    CLI::Option* pid_opt =
        match->add_option("--pid", match_args.pid, "Process id to scope to");
    match->add_option("--prefixes", match_args.prefixes_path,
                      "File with library prefixes (one per line)");
    match->add_option("--all-paths", match_args.all_paths,
                      "Enumerate up to N satisfying paths");
    match->add_flag("--strict", match_args.strict,
                    "Exit 1 when the match is ambiguous");
    match->add_option("--emit-dot", match_args.dot_path,
                      "Write a DOT rendering of the matched path");
    match->add_option("--jobs", match_args.jobs,
                      "Worker threads for segment matching");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Generate a model and simulate an execution");
    simulate
        ->add_option("-p,--params", sim_args.params_path,
                     "Generator/scenario params JSON")
        ->required();
    simulate->add_option("-o,--log", sim_args.log_path,
                         "Log output ('-' for stdout)");
    simulate->add_option("--truth", sim_args.truth_path,
                         "Ground-truth output path");
    simulate->add_option("--model", sim_args.model_path,
                         "Also write the generated model here");
    CLI::Option* seed_opt = simulate->add_option(
        "--seed", sim_args.seed, "Override the scenario seed");
    simulate->add_option("--k", sim_args.k, "Override the window size");
    simulate->add_option("--threads", sim_args.threads,
                         "Override the thread count");

    GenerateArgs gen_args;
    CLI::App* generate = app.add_subcommand(
        "generate", "Generate a synthetic app model");
    generate
        ->add_option("-p,--params", gen_args.params_path,
                     "Generator params JSON")
        ->required();
    generate->add_option("-o,--out", gen_args.out_path, "Model JSON path");

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Depth CDF and K selection for a model");
    analyze
        ->add_option("-g,--graph", analyze_args.graph_path,
                     "App model JSON")
        ->required();
    analyze
        ->add_option("--overhead", analyze_args.overhead_path,
                     "Overhead anchor table JSON")
        ->required();
    analyze->add_option("-o,--out", analyze_args.out_path,
                        "CDF CSV path ('-' for stdout)");

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand(
        "compare", "Guided vs backtracking on a simulated log");
    compare
        ->add_option("-g,--graph", compare_args.graph_path,
                     "App model JSON")
        ->required();
    compare
        ->add_option("-l,--log", compare_args.log_path,
                     "Audit log (JSON lines)")
        ->required();
    compare
        ->add_option("--truth", compare_args.truth_path,
                     "Ground-truth JSON")
        ->required();
    compare->add_option("-o,--out", compare_args.out_path,
                        "CSV output ('-' for stdout)");
    compare->add_option("--k", compare_args.k, "Window size in force");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (match->parsed()) {
            match_args.pid_set = pid_opt->count() > 0;
            return run_match(match_args);
        }
        if (simulate->parsed()) {
            sim_args.seed_set = seed_opt->count() > 0;
            return run_simulate(sim_args);
        }
        if (generate->parsed()) {
            return run_generate(gen_args);
        }
        if (analyze->parsed()) {
            return run_analyze(analyze_args);
        }
        if (compare->parsed()) {
            return run_compare(compare_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
