#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fogfed/error.hpp"
#include "fogfed/report.hpp"
#include "fogfed/suites.hpp"
#include "fogfed/sweep.hpp"
#include "fogfed/trace.hpp"

namespace {

using namespace fogfed;

int cmd_simulate(const std::string& config, const std::string& suite, const std::string& out_path,
                 std::size_t parallel, bool trace, std::optional<std::size_t> reps) {
    Scenario s = config.empty() ? builtin_suite(suite) : load_scenario(config);
    if (reps) {
        s.repetitions = *reps;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + out_path + "'");
    }
    std::ofstream trace_out;
    SweepOptions options;
    options.parallel = parallel;
    if (trace) {
        const std::string trace_path = out_path + ".trace.jsonl";
        trace_out.open(trace_path, std::ios::binary);
        if (!trace_out) {
            throw Error(ErrorCode::Io, "cannot write '" + trace_path + "'");
        }
        options.record_trace = true;
        options.observer = [&](const RunRow& row, const RunResult& res) {
            write_trace(trace_out, row, res);
        };
    }
    const auto rows = run_sweep(s, options);
    write_csv(out, rows);
    out.flush();
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing '" + out_path + "'");
    }
    std::cerr << "wrote " << rows.size() << " runs to " << out_path << "\n";
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + in_path + "'");
    }
    const auto rows = read_csv(in);
    const auto cells = summarize(rows);
    const auto deltas = paired_deltas(rows);
    std::cout << format_report(cells, deltas);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot write '" + out_path + "'");
        }
        write_summary_csv(out, cells, deltas);
    }
    return 0;
}

int cmd_suites(const std::string& show) {
    if (show.empty()) {
        std::cout << describe_suites();
    } else {
        std::cout << scenario_to_json(builtin_suite(show)).dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated fog simulator: workflow partitioning and probabilistic allocation"};
    app.require_subcommand(1);

    std::string config;
    std::string suite;
    std::string out_path;
    std::size_t parallel = fogfed::default_parallelism();
    bool trace = false;
    std::optional<std::size_t> reps;
    auto* sim = app.add_subcommand("simulate", "Run a scenario sweep and write one CSV row per run");
    auto* cfg_opt = sim->add_option("--config", config, "Scenario JSON file")->check(CLI::ExistingFile);
    auto* suite_opt = sim->add_option("--suite", suite, "Built-in suite name instead of a config file");
    cfg_opt->excludes(suite_opt);
    sim->add_option("--out", out_path, "Output CSV path")->required();
    sim->add_option("--parallel", parallel, "Concurrent runs (default: FOGFED_PARALLEL or core count)")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--trace", trace, "Also write <out>.trace.jsonl with every gateway decision");
    sim->add_option("--reps", reps, "Override the scenario's repetition count")
        ->check(CLI::PositiveNumber);

    std::string in_path;
    std::string summary_path;
    auto* rep = app.add_subcommand("report", "Aggregate a run CSV: mean and 95% CI per cell, paired deltas");
    rep->add_option("--in", in_path, "Run CSV produced by simulate")->required();
    rep->add_option("--out", summary_path, "Optional summary CSV");

    std::string show;
    auto* suites = app.add_subcommand("suites", "List the built-in experiment suites");
    suites->add_option("--show", show, "Print one suite as an editable scenario JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (config.empty() && suite.empty()) {
                std::cerr << "simulate: one of --config or --suite is required\n";
                return 2;
            }
            return cmd_simulate(config, suite, out_path, parallel, trace, reps);
        }
        if (rep->parsed()) {
            return cmd_report(in_path, summary_path);
        }
        return cmd_suites(show);
    } catch (const fogfed::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const auto code = e.code();
        return code == fogfed::ErrorCode::Config || code == fogfed::ErrorCode::Parse ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
