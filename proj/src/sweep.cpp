#include "fogfed/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "fogfed/error.hpp"
#include "fogfed/rng.hpp"

namespace fogfed {

namespace {

constexpr std::uint64_t kTopologyStream = 0x746f706f6c6f6779ULL;
constexpr std::uint64_t kEngineStream = 0x656e67696e650000ULL;

} // namespace

std::uint64_t scenario_base_seed(const Scenario& s) {
    return mix64(s.master_seed ^ fnv1a64(s.name));
}

std::uint64_t run_seed(std::uint64_t base, std::size_t cell, std::size_t rep) {
    return mix64(base + ((static_cast<std::uint64_t>(cell) << 24) | static_cast<std::uint64_t>(rep)));
}

std::size_t default_parallelism() {
    if (const char* env = std::getenv("FOGFED_PARALLEL")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<std::size_t>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

FederationModel build_model(const Scenario& s, const GridSpec& grid, std::uint64_t topology_seed,
                            const AppCatalog& apps) {
    auto topology = build_grid(grid.width, grid.height, topology_seed, grid.node_count);
    auto etc = build_etc(topology, apps.work_profiles(), s.bin_width_ms);
    auto ett = build_ett(topology, s.link, apps.input_sizes(), s.bin_width_ms);
    return FederationModel(std::move(topology), std::move(etc), std::move(ett));
}

RunResult run_once(const Scenario& s, const MethodSpec& method, const FederationModel& model,
                   FogId origin, const AppCatalog& apps, std::size_t requests, std::uint64_t seed,
                   bool record_trace) {
    WorkloadSpec spec = s.workload;
    spec.total_requests = requests;
    const auto arrivals = generate_workload(spec, seed);
    const auto reqs = make_requests(arrivals, apps, model.etc(), s.deadlines, origin);
    EngineConfig cfg;
    cfg.partition = PartitionConfig{s.alpha, method.partition};
    cfg.allocation = method.allocation;
    cfg.ci_level = s.ci_level;
    cfg.queue_aware_partitioning = s.queue_aware_partitioning;
    cfg.exec_scale = s.exec_scale;
    cfg.record_trace = record_trace;
    return run_engine(model, reqs, cfg, mix64(seed ^ kEngineStream));
}

std::vector<RunRow> run_sweep(const Scenario& s, const SweepOptions& options) {
    validate(s);
    const AppCatalog apps(s.templates);
    const std::vector<int> degrees = s.degrees.empty() ? std::vector<int>{0} : s.degrees;
    const std::size_t loads = s.request_counts.size();
    const std::size_t methods = s.methods.size();
    const std::size_t reps = s.repetitions;
    const std::uint64_t base = scenario_base_seed(s);
    const std::uint64_t topo_base = mix64(base ^ kTopologyStream);

    std::vector<RunRow> rows(degrees.size() * loads * methods * reps);
    auto row_index = [&](std::size_t d, std::size_t l, std::size_t m, std::size_t r) {
        return ((d * loads + l) * methods + m) * reps + r;
    };

    // One task per (degree, repetition): the model and its memo are shared by
    // every load and method of that repetition.
    const std::size_t tasks = degrees.size() * reps;
    std::atomic<std::size_t> next{0};
    std::mutex observer_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) {
                return;
            }
            {
                std::lock_guard lock(failure_mutex);
                if (failure) {
                    return;
                }
            }
            try {
                const std::size_t d = t / reps;
                const std::size_t r = t % reps;
                const GridSpec grid = s.degrees.empty() ? s.grid : degree_grid(degrees[d]);
                const FederationModel model = build_model(s, grid, run_seed(topo_base, d, r), apps);
                const FogId origin = grid_origin(grid, model.topology());
                const int degree = static_cast<int>(model.topology().degree(origin));
                for (std::size_t l = 0; l < loads; ++l) {
                    const std::uint64_t seed = run_seed(base, d * loads + l, r);
                    for (std::size_t m = 0; m < methods; ++m) {
                        const RunResult res = run_once(s, s.methods[m], model, origin, apps,
                                                       s.request_counts[l], seed,
                                                       options.record_trace);
                        RunRow& row = rows[row_index(d, l, m, r)];
                        row.scenario = s.name;
                        row.method = s.methods[m].label;
                        row.requests = s.request_counts[l];
                        row.mix = s.workload.mix;
                        row.degree = degree;
                        row.seed = seed;
                        row.meet_rate = res.meet_rate;
                        row.avg_makespan_ms = res.avg_makespan_ms;
                        if (options.observer) {
                            std::lock_guard lock(observer_mutex);
                            options.observer(row, res);
                        }
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t threads = std::max<std::size_t>(1, std::min(options.parallel, tasks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

} // namespace fogfed
