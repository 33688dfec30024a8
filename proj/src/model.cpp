#include "fogfed/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

#include "fogfed/error.hpp"

namespace fogfed {

std::string_view to_string(AppType app) {
    switch (app) {
    case AppType::Fire: return "Fire";
    case AppType::HAR: return "HAR";
    case AppType::Oil: return "Oil";
    case AppType::AIE: return "AIE";
    }
    return "?";
}

AppType parse_app(std::string_view tag) {
    for (AppType app : kAllApps) {
        if (to_string(app) == tag) {
            return app;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown application tag '" + std::string(tag) + "'");
}

std::optional<std::size_t> WorkflowSpec::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> WorkflowSpec::predecessors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges) {
        if (e.to == v) {
            out.push_back(e.from);
        }
    }
    return out;
}

std::vector<std::size_t> WorkflowSpec::successors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges) {
        if (e.from == v) {
            out.push_back(e.to);
        }
    }
    return out;
}

bool WorkflowSpec::is_entry(std::size_t v) const {
    return std::none_of(edges.begin(), edges.end(), [v](const auto& e) { return e.to == v; });
}

bool WorkflowSpec::is_exit(std::size_t v) const {
    return std::none_of(edges.begin(), edges.end(), [v](const auto& e) { return e.from == v; });
}

double WorkflowSpec::input_mb(std::size_t v) const {
    double total = 0.0;
    bool any = false;
    for (const auto& e : edges) {
        if (e.to == v) {
            total += e.data_mb;
            any = true;
        }
    }
    return any ? total : vertices[v].output_mb;
}

namespace {

// Kahn's algorithm with an id-ordered ready set. Returns fewer than n
// vertices when the graph has a cycle.
std::vector<std::size_t> kahn(const WorkflowSpec& w) {
    const std::size_t n = w.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& e : w.edges) {
        if (e.from < n && e.to < n) {
            ++indegree[e.to];
            out[e.from].push_back(e.to);
        }
    }
    auto by_id = [&w](std::size_t a, std::size_t b) {
        return w.vertices[a].id != w.vertices[b].id ? w.vertices[a].id > w.vertices[b].id : a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) {
            ready.push(v);
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (std::size_t s : out[v]) {
            if (--indegree[s] == 0) {
                ready.push(s);
            }
        }
    }
    return order;
}

} // namespace

std::vector<Violation> validate_dag(const WorkflowSpec& w) {
    std::vector<Violation> out;
    const std::size_t n = w.size();
    if (n == 0) {
        out.push_back({ViolationKind::Empty, "workflow has no vertices"});
        return out;
    }
    std::set<std::string> ids;
    for (const auto& v : w.vertices) {
        if (!ids.insert(v.id).second) {
            out.push_back({ViolationKind::DuplicateId, "duplicate vertex id '" + v.id + "'"});
        }
        if (!(v.work.mean > 0.0) || !(v.work.std_dev >= 0.0) || !(v.output_mb >= 0.0)) {
            out.push_back({ViolationKind::InvalidWork, "vertex '" + v.id + "' has invalid work or output"});
        }
    }
    bool edges_ok = true;
    for (const auto& e : w.edges) {
        if (e.from >= n || e.to >= n || e.from == e.to) {
            out.push_back({ViolationKind::BadEdge, "edge references an invalid vertex"});
            edges_ok = false;
            continue;
        }
        if (std::abs(e.data_mb - w.vertices[e.from].output_mb) > 1e-12) {
            out.push_back({ViolationKind::EdgeDataMismatch,
                           "edge " + w.vertices[e.from].id + "->" + w.vertices[e.to].id +
                               " carries " + std::to_string(e.data_mb) + " MB but source outputs " +
                               std::to_string(w.vertices[e.from].output_mb) + " MB"});
        }
    }
    if (!edges_ok) {
        return out;
    }
    if (kahn(w).size() != n) {
        out.push_back({ViolationKind::Cycle, "workflow contains a cycle"});
    }

    // Weak connectivity via union-find.
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& e : w.edges) {
        parent[find(e.from)] = find(e.to);
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (find(i) != find(0)) {
            out.push_back({ViolationKind::Disconnected, "vertex '" + w.vertices[i].id +
                                                            "' is not connected to '" +
                                                            w.vertices[0].id + "'"});
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (w.vertices[i].pinned && !w.is_entry(i)) {
            out.push_back({ViolationKind::PinnedNonEntry,
                           "only entry vertices may be pinned ('" + w.vertices[i].id + "')"});
        }
    }
    return out;
}

std::vector<std::size_t> topological_order(const WorkflowSpec& w) {
    for (const auto& e : w.edges) {
        if (e.from >= w.size() || e.to >= w.size()) {
            throw Error(ErrorCode::InvalidArgument, "edge references an invalid vertex");
        }
    }
    auto order = kahn(w);
    if (order.size() != w.size()) {
        throw Error(ErrorCode::NotADag, "workflow contains a cycle");
    }
    return order;
}

NormalSpec app_work_profile(AppType app, double reference_mips) {
    // Execution time mean / std in ms on the GPU machine class.
    NormalSpec ms;
    switch (app) {
    case AppType::Fire: ms = {1349.5, 418.9}; break;
    case AppType::HAR: ms = {0.51, 0.006}; break;
    case AppType::Oil: ms = {65.98, 0.47}; break;
    case AppType::AIE: ms = {7.55, 0.04}; break;
    }
    const double scale = reference_mips / 1000.0;
    return {ms.mean * scale, ms.std_dev * scale};
}

namespace {

struct TemplateVertex {
    const char* key;
    const char* name;
    double output_mb;
};

std::vector<TemplateVertex> template_vertices(AppType app) {
    switch (app) {
    case AppType::Fire:
        return {{"capture", "video capture", 10.0},
                {"preprocess", "video pre-processing", 8.0},
                {"noise_removal", "noise removal", 5.0},
                {"feature_extraction", "feature extraction", 2.0},
                {"detection", "fire detection", 1.0},
                {"location_mapping", "location mapping", 0.1},
                {"alert", "alert generation", 0.1}};
    case AppType::Oil:
        return {{"preprocess", "data pre-processing", 1.0},
                {"dark_spot_detection", "dark spot detection", 1.0},
                {"feature_extraction", "feature extraction", 1.0},
                {"classification", "classification", 1.0},
                {"segmentation", "segmentation", 1.0}};
    case AppType::HAR:
        return {{"preprocess", "data pre-processing", 1.0},
                {"feature_extraction", "feature extraction", 1.0},
                {"classification", "classification", 1.0},
                {"activity_recognition", "activity recognition", 1.0}};
    case AppType::AIE:
        return {{"preprocess", "data pre-processing", 1.0},
                {"initial_model", "initial model development", 1.0},
                {"inversion", "inversion", 1.0},
                {"impedance_estimation", "acoustic impedance estimation", 1.0}};
    }
    return {};
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

WorkflowSpec builtin_app(AppType app, const TemplateOptions& options) {
    const auto verts = template_vertices(app);
    const NormalSpec total = app_work_profile(app, options.reference_mips);
    const double n = static_cast<double>(verts.size());
    // Even split whose independent-normal sum reproduces the application profile.
    const NormalSpec per_vertex{total.mean / n, total.std_dev / std::sqrt(n)};

    WorkflowSpec w;
    const std::string prefix = lower(to_string(app));
    for (std::size_t i = 0; i < verts.size(); ++i) {
        MicroServiceSpec m;
        m.id = prefix + "." + verts[i].key;
        m.app = std::string(to_string(app));
        m.name = verts[i].name;
        m.work = per_vertex;
        m.output_mb = verts[i].output_mb;
        m.pinned = app == AppType::Fire && i == 0 && options.pin_capture;
        w.vertices.push_back(std::move(m));
    }
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        w.edges.push_back({i, i + 1, verts[i].output_mb});
    }
    return w;
}

WorkflowSpec to_monolithic(const WorkflowSpec& w) {
    if (w.size() == 1) {
        return w;
    }
    MicroServiceSpec mono;
    const bool one_app = std::all_of(w.vertices.begin(), w.vertices.end(),
                                     [&](const auto& v) { return v.app == w.vertices[0].app; });
    if (one_app) {
        mono.id = lower(w.vertices[0].app) + ".monolithic";
        mono.app = w.vertices[0].app;
    } else {
        mono.id = "monolithic(";
        for (std::size_t i = 0; i < w.size(); ++i) {
            mono.id += (i ? "," : "") + w.vertices[i].id;
        }
        mono.id += ")";
        mono.app = "mixed";
    }
    mono.name = mono.app + " (monolithic)";
    double mean = 0.0;
    double var = 0.0;
    double out_mb = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& v = w.vertices[i];
        mean += v.work.mean;
        var += v.work.std_dev * v.work.std_dev;
        mono.pinned = mono.pinned || v.pinned;
        if (w.is_exit(i)) {
            out_mb += v.output_mb;
        }
    }
    mono.work = {mean, std::sqrt(var)};
    mono.output_mb = out_mb;

    WorkflowSpec out;
    out.vertices.push_back(std::move(mono));
    return out;
}

Request assign_deadlines(std::shared_ptr<const WorkflowSpec> w, double arrival_ms,
                         const DeadlinePolicy& policy,
                         const std::map<std::string, double>& mean_exec_ms) {
    Request r;
    r.arrival_ms = arrival_ms;
    r.monolithic = w->size() == 1;
    double total = 0.0;
    for (const auto& v : w->vertices) {
        auto it = mean_exec_ms.find(v.id);
        if (it == mean_exec_ms.end()) {
            throw Error(ErrorCode::IncompleteProfile, "no mean execution time for '" + v.id + "'");
        }
        if (!(it->second >= 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "negative mean execution time for '" + v.id + "'");
        }
        const double slack = it->second + policy.epsilon_ms + policy.mean_comm_delay_ms;
        r.service_slack_ms.push_back(slack);
        r.service_deadline_ms.push_back(arrival_ms + slack);
        total += slack;
    }
    r.workflow_deadline_ms = arrival_ms + total;
    r.workflow = std::move(w);
    return r;
}

} // namespace fogfed
