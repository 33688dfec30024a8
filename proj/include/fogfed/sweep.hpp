#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fogfed/engine.hpp"
#include "fogfed/scenario.hpp"
#include "fogfed/workload.hpp"

namespace fogfed {

/// One CSV row.
struct RunRow {
    std::string scenario;
    std::string method;
    std::size_t requests = 0;
    double mix = 0.0;
    int degree = 0;
    std::uint64_t seed = 0;
    double meet_rate = 0.0;
    double avg_makespan_ms = 0.0;
};

/// Called once per finished run. Calls are serialized but arrive in
/// completion order when runs execute in parallel.
using RunObserver = std::function<void(const RunRow&, const RunResult&)>;

struct SweepOptions {
    std::size_t parallel = 1;
    bool record_trace = false;
    RunObserver observer;
};

/// Per-scenario seed base derived from the master seed and the scenario name.
std::uint64_t scenario_base_seed(const Scenario& s);

/// Injective in (cell, rep) for a fixed base: a bijective mix of base + packed index.
std::uint64_t run_seed(std::uint64_t base, std::size_t cell, std::size_t rep);

/// FOGFED_PARALLEL when set to a positive integer, else the hardware thread count.
std::size_t default_parallelism();

/// Topology plus ETC/ETT matrices for one repetition of one topology shape.
FederationModel build_model(const Scenario& s, const GridSpec& grid, std::uint64_t topology_seed,
                            const AppCatalog& apps);

/// One simulation: workload from `seed`, engine stream derived from it.
RunResult run_once(const Scenario& s, const MethodSpec& method, const FederationModel& model,
                   FogId origin, const AppCatalog& apps, std::size_t requests, std::uint64_t seed,
                   bool record_trace = false);

/// Runs every (degree, load, method, repetition) of the scenario. Rows come
/// back ordered by degree, load, method, then repetition, whatever the
/// parallelism. Within a repetition every load and method shares the
/// topology, and every method of a (degree, load, repetition) cell shares
/// the run seed.
std::vector<RunRow> run_sweep(const Scenario& s, const SweepOptions& options = {});

} // namespace fogfed
