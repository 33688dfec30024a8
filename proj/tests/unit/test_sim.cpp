#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fogfed/aggregate.hpp"
#include "fogfed/engine.hpp"
#include "fogfed/error.hpp"
#include "fogfed/report.hpp"
#include "fogfed/scenario.hpp"
#include "fogfed/suites.hpp"
#include "fogfed/sweep.hpp"
#include "fogfed/trace.hpp"
#include "fogfed/workload.hpp"
#include "oracles.hpp"

using namespace fogfed;

namespace {

struct SingleNode {
    std::shared_ptr<const WorkflowSpec> workflow;
    std::unique_ptr<FederationModel> model;

    SingleNode(std::size_t chain_len, double service_ms) {
        WorkflowSpec w;
        for (std::size_t i = 0; i < chain_len; ++i) {
            MicroServiceSpec v;
            v.id = "s" + std::to_string(i);
            v.work = {service_ms, 0.0};
            v.output_mb = 1.0;
            w.vertices.push_back(v);
            if (i > 0) {
                w.edges.push_back({i - 1, i, 1.0});
            }
        }
        workflow = std::make_shared<const WorkflowSpec>(std::move(w));
        // 1000 MIPS makes service_ms MI take service_ms milliseconds.
        const FederationTopology topo(std::vector<FogSystem>{{0, 0, 0, 1, 1000.0}});
        std::map<std::string, NormalSpec> profiles;
        std::map<std::string, double> sizes;
        for (const auto& v : workflow->vertices) {
            profiles[v.id] = v.work;
            sizes[v.id] = 1.0;
        }
        model = std::make_unique<FederationModel>(topo, build_etc(topo, profiles, 1.0),
                                                  build_ett(topo, LinkProfile{}, sizes, 1.0));
    }

    std::vector<Request> requests(const std::vector<double>& arrivals, double slack_each) const {
        std::vector<Request> out;
        for (std::size_t k = 0; k < arrivals.size(); ++k) {
            Request r;
            r.id = k;
            r.arrival_ms = arrivals[k];
            r.workflow = workflow;
            r.service_slack_ms.assign(workflow->size(), slack_each);
            for (double s : r.service_slack_ms) {
                r.service_deadline_ms.push_back(arrivals[k] + s);
            }
            r.workflow_deadline_ms = arrivals[k] + slack_each * static_cast<double>(workflow->size());
            out.push_back(r);
        }
        return out;
    }
};

EngineConfig local_only() {
    EngineConfig c;
    c.partition = {0.5, PartitionMethod::NoPartition};
    c.allocation = AllocMethod::NoFederation;
    c.record_schedule = true;
    c.record_trace = true;
    return c;
}

std::vector<double> spaced(std::size_t n, double gap) {
    std::vector<double> a;
    for (std::size_t k = 0; k < n; ++k) {
        a.push_back(gap * static_cast<double>(k));
    }
    return a;
}

} // namespace

TEST_CASE("single-node FIFO matches the hand oracle") {
    for (std::size_t len : {1u, 3u}) {
        const SingleNode sys(len, 100.0);
        const auto arrivals = spaced(8, 70.0);
        const auto res = run_engine(*sys.model, sys.requests(arrivals, 1e6), local_only(), 7);
        const auto expect = oracle::fifo_single_node(arrivals, len, 100.0);
        REQUIRE(res.schedule.size() == expect.size());
        std::vector<ExecRecord> got = res.schedule;
        std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].request == expect[i].request);
            CHECK(got[i].vertex == expect[i].vertex);
            CHECK(got[i].start_ms == expect[i].start);
            CHECK(got[i].end_ms == expect[i].end);
        }
        if (len == 1) {
            for (const auto& o : res.outcomes) {
                CHECK(o.completion_ms - o.arrival_ms == 100.0 + 30.0 * static_cast<double>(o.id));
            }
        }
        CHECK(res.met == 8);
    }
}

TEST_CASE("deadline extremes") {
    const SingleNode sys(2, 100.0);
    const auto ok = run_engine(*sys.model, sys.requests({0.0}, 1e6), local_only(), 1);
    CHECK(ok.meet_rate == 1.0);
    CHECK(ok.avg_makespan_ms == 200.0);
    const auto late = run_engine(*sys.model, sys.requests({0.0, 10.0}, 0.0), local_only(), 1);
    CHECK(late.meet_rate == 0.0);
    CHECK(late.missed == 2);
    CHECK(run_engine(*sys.model, {}, local_only(), 1).total == 0);
}

TEST_CASE("engine invariants on a federated workload") {
    const auto s = builtin_suite("fig5_partitioning");
    const AppCatalog apps(s.templates);
    const auto model = build_model(s, s.grid, 99, apps);
    const FogId origin = grid_origin(s.grid, model.topology());
    const auto arrivals = generate_workload({120, 0.3, 20000.0}, 5);
    const auto requests = make_requests(arrivals, apps, model.etc(), s.deadlines, origin);

    for (auto method : {PartitionMethod::ProPart, PartitionMethod::MinCut}) {
        EngineConfig cfg = local_only();
        cfg.partition.method = method;
        cfg.allocation = AllocMethod::MaxProbability;
        const auto res = run_engine(model, requests, cfg, 123);

        CHECK(res.total == requests.size());
        CHECK(res.met + res.missed == res.total);
        CHECK(res.outcomes.size() == res.total);
        CHECK(res.trace.size() == res.total);
        std::size_t instances = 0;
        for (const auto& r : requests) {
            instances += r.workflow->size();
        }
        CHECK(res.schedule.size() == instances);

        std::map<std::pair<std::uint64_t, std::size_t>, ExecRecord> by_vertex;
        std::map<std::pair<FogId, std::size_t>, std::vector<ExecRecord>> by_node;
        for (const auto& e : res.schedule) {
            CHECK(by_vertex.emplace(std::make_pair(e.request, e.vertex), e).second);
            by_node[{e.fog, e.node}].push_back(e);
            CHECK(e.start_ms >= e.ready_ms);
            CHECK(e.end_ms >= e.start_ms);
            CHECK(e.ready_ms >= requests[e.request].arrival_ms);
        }
        for (const auto& r : requests) {
            for (const auto& edge : r.workflow->edges) {
                const auto& a = by_vertex.at({r.id, edge.from});
                const auto& b = by_vertex.at({r.id, edge.to});
                CHECK(b.ready_ms >= a.end_ms);
            }
        }
        for (auto& [node, list] : by_node) {
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
            for (std::size_t i = 1; i < list.size(); ++i) {
                CHECK(list[i].start_ms >= list[i - 1].end_ms);
            }
        }
        // Pinned vertices run at the origin.
        for (const auto& e : res.schedule) {
            if (requests[e.request].workflow->vertices[e.vertex].pinned) {
                CHECK(e.fog == origin);
            }
        }

        const auto again = run_engine(model, requests, cfg, 123);
        CHECK(again.met == res.met);
        CHECK(again.avg_makespan_ms == res.avg_makespan_ms);
        REQUIRE(again.schedule.size() == res.schedule.size());
        for (std::size_t i = 0; i < res.schedule.size(); ++i) {
            CHECK(again.schedule[i].start_ms == res.schedule[i].start_ms);
            CHECK(again.schedule[i].fog == res.schedule[i].fog);
        }
    }
}

TEST_CASE("workload generation") {
    const auto four = generate_workload({4, 0.0, 1000.0}, 3);
    std::set<AppType> apps;
    for (const auto& a : four) {
        apps.insert(a.app);
        CHECK_FALSE(a.monolithic);
    }
    CHECK(apps.size() == 4);

    const auto half = generate_workload({100, 0.5, 100000.0}, 9);
    CHECK(std::count_if(half.begin(), half.end(), [](const auto& a) { return a.monolithic; }) == 50);
    for (std::size_t k = 0; k < half.size(); ++k) {
        CHECK(half[k].id == k);
        CHECK(half[k].arrival_ms >= 0.0);
        CHECK(half[k].arrival_ms < 100000.0);
        if (k > 0) {
            CHECK(half[k].arrival_ms >= half[k - 1].arrival_ms);
        }
    }
    const auto all = generate_workload({40, 1.0, 1000.0}, 9);
    CHECK(std::all_of(all.begin(), all.end(), [](const auto& a) { return a.monolithic; }));

    const auto again = generate_workload({100, 0.5, 100000.0}, 9);
    for (std::size_t k = 0; k < half.size(); ++k) {
        CHECK(again[k].arrival_ms == half[k].arrival_ms);
        CHECK(again[k].monolithic == half[k].monolithic);
    }
    CHECK(generate_workload({100, 0.5, 100000.0}, 10)[0].arrival_ms != half[0].arrival_ms);
    CHECK_THROWS_AS(generate_workload({10, 1.5, 1000.0}, 1), Error);
    CHECK_THROWS_AS(generate_workload({10, 0.5, 0.0}, 1), Error);
}

TEST_CASE("mean_ci") {
    const std::vector<double> two{0.4, 0.6};
    const auto s = mean_ci(two);
    CHECK(s.n == 2);
    CHECK(s.mean == doctest::Approx(0.5));
    CHECK(s.half_width == doctest::Approx(0.196).epsilon(1e-3));
    const std::vector<double> one{0.4};
    try {
        mean_ci(one);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingData);
    }
}

TEST_CASE("run seeds are distinct across cells and repetitions") {
    std::set<std::uint64_t> seen;
    for (std::size_t cell = 0; cell < 64; ++cell) {
        for (std::size_t rep = 0; rep < 64; ++rep) {
            CHECK(seen.insert(run_seed(17, cell, rep)).second);
        }
    }
    Scenario a;
    Scenario b;
    b.name = "other";
    CHECK(scenario_base_seed(a) != scenario_base_seed(b));
}

TEST_CASE("sweep rows are independent of parallelism") {
    auto s = builtin_suite("fig6_alloc_workflows");
    s.request_counts = {40};
    s.repetitions = 2;
    const auto serial = run_sweep(s, {1, false, nullptr});
    const auto parallel = run_sweep(s, {3, false, nullptr});
    REQUIRE(serial.size() == s.methods.size() * 2);
    REQUIRE(parallel.size() == serial.size());
    std::ostringstream x;
    std::ostringstream y;
    write_csv(x, serial);
    write_csv(y, parallel);
    CHECK(x.str() == y.str());
    // Methods of a cell and repetition share the seed.
    CHECK(serial[0].seed == serial[2].seed);
    CHECK(serial[0].seed != serial[1].seed);
}

TEST_CASE("csv round trip and report") {
    std::vector<RunRow> rows{{"x", "a", 10, 0.5, 0, 1, 0.4, 100.0},
                             {"x", "a", 10, 0.5, 0, 2, 0.6, 120.0},
                             {"x", "b", 10, 0.5, 0, 1, 0.3, 90.0},
                             {"x", "b", 10, 0.5, 0, 2, 0.5, 110.0}};
    std::stringstream io;
    write_csv(io, rows);
    CHECK(io.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const auto back = read_csv(io);
    REQUIRE(back.size() == 4);
    CHECK(back[1].meet_rate == 0.6);
    const auto cells = summarize(back);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].meet_rate.mean == doctest::Approx(0.5));
    const auto deltas = paired_deltas(back);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].meet_rate.mean == doctest::Approx(0.1));
    CHECK(deltas[0].meet_rate.half_width == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(format_report(cells, deltas).empty());

    std::istringstream bad(std::string(kCsvHeader) + "\nx,a,10,0.5,0,1,oops,1\n");
    try {
        read_csv(bad);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}

TEST_CASE("trace records carry the decision chain") {
    const SingleNode sys(2, 100.0);
    const auto res = run_engine(*sys.model, sys.requests({0.0}, 1e6), local_only(), 1);
    REQUIRE(res.trace.size() == 1);
    const RunRow run{"s", "nofed", 1, 0.0, 0, 4, 1.0, 200.0};
    const auto j = trace_record(run, res.trace[0]);
    CHECK(j["partitioning"] == "none");
    CHECK(j["decisions"].size() == 1);
    CHECK(j["decisions"][0]["reason"] == "Local-Default");
    std::ostringstream out;
    write_trace(out, run, res);
    const auto text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE("scenario validation and degree grids") {
    for (int d = 1; d <= 4; ++d) {
        const auto g = degree_grid(d);
        const auto topo = build_grid(g.width, g.height, 1);
        CHECK(topo.degree(grid_origin(g, topo)) == static_cast<std::size_t>(d));
    }
    CHECK_THROWS_AS(degree_grid(5), Error);

    Scenario s;
    s.alpha = 2.0;
    try {
        validate(s);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    const auto fig7 = builtin_suite("fig7_alloc_monolithic");
    const auto round = scenario_from_json(scenario_to_json(fig7));
    CHECK(round.request_counts == fig7.request_counts);
    CHECK(round.methods.size() == fig7.methods.size());
    CHECK_THROWS_AS(builtin_suite("fig99"), Error);
}
