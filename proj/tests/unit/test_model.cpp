#include <doctest.h>

#include <algorithm>
#include <random>

#include "fogfed/error.hpp"
#include "fogfed/model.hpp"
#include "fogfed/workflow_json.hpp"
#include "oracles.hpp"

using namespace fogfed;

namespace {

MicroServiceSpec vertex(const std::string& id, double mean = 100.0, double out = 1.0) {
    MicroServiceSpec v;
    v.id = id;
    v.app = "test";
    v.name = id;
    v.work = {mean, 0.0};
    v.output_mb = out;
    return v;
}

WorkflowSpec chain(std::size_t n) {
    WorkflowSpec w;
    for (std::size_t i = 0; i < n; ++i) {
        w.vertices.push_back(vertex(std::string(1, static_cast<char>('A' + i))));
        if (i > 0) {
            w.edges.push_back({i - 1, i, 1.0});
        }
    }
    return w;
}

bool has(const std::vector<Violation>& v, ViolationKind k) {
    return std::any_of(v.begin(), v.end(), [k](const Violation& x) { return x.kind == k; });
}

} // namespace

TEST_CASE("built-in application templates") {
    CHECK(builtin_app(AppType::Fire).size() == 7);
    CHECK(builtin_app(AppType::Oil).size() == 5);
    CHECK(builtin_app(AppType::HAR).size() == 4);
    CHECK(builtin_app(AppType::AIE).size() == 4);

    const auto oil = builtin_app(AppType::Oil);
    const std::vector<std::string> names{"data pre-processing", "dark spot detection",
                                         "feature extraction", "classification", "segmentation"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        CHECK(oil.vertices[i].name == names[i]);
    }

    for (AppType app : kAllApps) {
        const auto w = builtin_app(app);
        CHECK(validate_dag(w).empty());
        CHECK(w.edges.size() + 1 == w.size());
        for (std::size_t v = 0; v < w.size(); ++v) {
            CHECK(w.vertices[v].pinned == (app == AppType::Fire && v == 0));
        }
        // Per-vertex normals recombine into the application profile.
        const auto total = app_work_profile(app);
        const auto mono = to_monolithic(w);
        CHECK(mono.vertices[0].work.mean == doctest::Approx(total.mean));
        CHECK(mono.vertices[0].work.std_dev == doctest::Approx(total.std_dev));
    }
    CHECK_FALSE(builtin_app(AppType::Fire, {2000.0, false}).vertices[0].pinned);
    // Reference calibration: 1349.5 ms on a 2000 MIPS fog.
    CHECK(app_work_profile(AppType::Fire).mean == doctest::Approx(2699.0));
}

TEST_CASE("to_monolithic") {
    auto single = chain(1);
    single.vertices[0].work = {42.0, 3.0};
    const auto same = to_monolithic(single);
    CHECK(same.size() == 1);
    CHECK(same.vertices[0].work.mean == 42.0);

    WorkflowSpec two;
    two.vertices = {vertex("a", 100.0, 2.0), vertex("b", 200.0, 0.5)};
    two.vertices[0].work.std_dev = 3.0;
    two.vertices[1].work.std_dev = 4.0;
    two.edges = {{0, 1, 2.0}};
    const auto mono = to_monolithic(two);
    CHECK(mono.vertices[0].work.mean == 300.0);
    CHECK(mono.vertices[0].work.std_dev == doctest::Approx(5.0));
    CHECK(mono.vertices[0].output_mb == 0.5);

    const auto fire = builtin_app(AppType::Fire);
    double sum = 0.0;
    for (const auto& v : fire.vertices) {
        sum += v.work.mean;
    }
    const auto fire_mono = to_monolithic(fire);
    CHECK(fire_mono.vertices[0].work.mean == doctest::Approx(sum).epsilon(1e-12));
    CHECK(fire_mono.vertices[0].pinned);
    CHECK(fire_mono.vertices[0].id == "fire.monolithic");
}

TEST_CASE("assign_deadlines") {
    auto one = std::make_shared<const WorkflowSpec>(chain(1));
    const auto r = assign_deadlines(one, 0.0, {50.0, 20.0}, {{"A", 100.0}});
    CHECK(r.service_deadline_ms[0] == 170.0);
    CHECK(r.workflow_deadline_ms == 170.0);
    CHECK(assign_deadlines(one, 0.0, {0.0, 0.0}, {{"A", 100.0}}).workflow_deadline_ms == 100.0);

    auto three = std::make_shared<const WorkflowSpec>(chain(3));
    const std::map<std::string, double> means{{"A", 10.0}, {"B", 20.0}, {"C", 30.0}};
    const auto r3 = assign_deadlines(three, 1000.0, {5.0, 2.0}, means);
    CHECK(r3.workflow_deadline_ms == 1081.0);
    CHECK(r3.relative_deadline_ms() == 81.0);

    // Translation equivariance.
    const auto shifted = assign_deadlines(three, 1250.0, {5.0, 2.0}, means);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(shifted.service_deadline_ms[i] - r3.service_deadline_ms[i] == doctest::Approx(250.0));
    }

    try {
        assign_deadlines(three, 0.0, {}, {{"A", 1.0}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompleteProfile);
    }
}

TEST_CASE("validate_dag") {
    CHECK(validate_dag(chain(3)).empty());

    auto cyc = chain(2);
    cyc.edges.push_back({1, 0, 1.0});
    CHECK(has(validate_dag(cyc), ViolationKind::Cycle));

    auto mismatch = chain(2);
    mismatch.vertices[0].output_mb = 3.0;
    mismatch.edges[0].data_mb = 5.0;
    CHECK(has(validate_dag(mismatch), ViolationKind::EdgeDataMismatch));

    auto split = chain(3);
    split.edges.pop_back();
    CHECK(has(validate_dag(split), ViolationKind::Disconnected));

    auto pinned = chain(3);
    pinned.vertices[1].pinned = true;
    CHECK(has(validate_dag(pinned), ViolationKind::PinnedNonEntry));

    CHECK(has(validate_dag(WorkflowSpec{}), ViolationKind::Empty));
}

TEST_CASE("topological_order") {
    CHECK(topological_order(chain(3)) == std::vector<std::size_t>{0, 1, 2});

    // Diamond listed out of order: the id tie-break puts B before C.
    WorkflowSpec d;
    d.vertices = {vertex("D"), vertex("C"), vertex("A"), vertex("B")};
    d.edges = {{2, 3, 1.0}, {2, 1, 1.0}, {3, 0, 1.0}, {1, 0, 1.0}};
    CHECK(topological_order(d) == std::vector<std::size_t>{2, 3, 1, 0});

    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
        auto w = oracle::random_dag(gen, 3 + static_cast<std::size_t>(i % 8), 0.4);
        std::reverse(w.vertices.begin(), w.vertices.end());
        const std::size_t n = w.size();
        for (auto& e : w.edges) {
            e.from = n - 1 - e.from;
            e.to = n - 1 - e.to;
        }
        const auto order = topological_order(w);
        CHECK(order == topological_order(w));
        std::vector<std::size_t> pos(n);
        for (std::size_t k = 0; k < n; ++k) {
            pos[order[k]] = k;
        }
        for (const auto& e : w.edges) {
            CHECK(pos[e.from] < pos[e.to]);
        }
    }

    auto cyc = chain(3);
    cyc.edges.push_back({2, 0, 1.0});
    try {
        topological_order(cyc);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotADag);
    }
}

TEST_CASE("workflow JSON round trip and errors") {
    const auto fire = builtin_app(AppType::Fire);
    const auto back = workflow_from_json(workflow_to_json(fire));
    REQUIRE(back.size() == fire.size());
    for (std::size_t i = 0; i < fire.size(); ++i) {
        CHECK(back.vertices[i].id == fire.vertices[i].id);
        CHECK(back.vertices[i].work.mean == fire.vertices[i].work.mean);
        CHECK(back.vertices[i].pinned == fire.vertices[i].pinned);
    }
    CHECK(back.edges.size() == fire.edges.size());

    const auto bad_edge = nlohmann::json::parse(R"({
        "vertices": [{"id": "a", "work": {"mean_mi": 1, "std_mi": 0}}],
        "edges": [{"from": "a", "to": "zz"}]})");
    CHECK_THROWS_AS(workflow_from_json(bad_edge), Error);
    const auto no_work = nlohmann::json::parse(R"({"vertices": [{"id": "a"}]})");
    try {
        workflow_from_json(no_work);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("mean_mi") != std::string::npos);
    }
}

TEST_CASE("app tags") {
    for (AppType app : kAllApps) {
        CHECK(parse_app(to_string(app)) == app);
    }
    CHECK_THROWS_AS(parse_app("Drone"), Error);
}
