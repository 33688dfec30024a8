#include "fogfed/workflow_json.hpp"

#include "fogfed/error.hpp"

namespace fogfed {

namespace {

template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw Error(ErrorCode::Config, where + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, where + "." + key + ": " + e.what());
    }
}

} // namespace

WorkflowSpec workflow_from_json(const nlohmann::json& doc) {
    WorkflowSpec w;
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
        throw Error(ErrorCode::Config, "workflow: 'vertices' array required");
    }
    std::size_t i = 0;
    for (const auto& jv : doc["vertices"]) {
        const std::string where = "workflow.vertices[" + std::to_string(i++) + "]";
        MicroServiceSpec m;
        m.id = field<std::string>(jv, "id", where);
        m.name = jv.value("name", m.id);
        m.app = jv.value("app", std::string("custom"));
        const auto& work = jv.contains("work") ? jv["work"] : nlohmann::json::object();
        m.work.mean = field<double>(work, "mean_mi", where + ".work");
        m.work.std_dev = field<double>(work, "std_mi", where + ".work");
        m.output_mb = jv.value("output_mb", 0.0);
        m.pinned = jv.value("pinned", false);
        w.vertices.push_back(std::move(m));
    }
    i = 0;
    for (const auto& je : doc.value("edges", nlohmann::json::array())) {
        const std::string where = "workflow.edges[" + std::to_string(i++) + "]";
        const auto from = w.index_of(field<std::string>(je, "from", where));
        const auto to = w.index_of(field<std::string>(je, "to", where));
        if (!from || !to) {
            throw Error(ErrorCode::Config, where + ": unknown vertex id");
        }
        w.edges.push_back({*from, *to, w.vertices[*from].output_mb});
    }
    const auto violations = validate_dag(w);
    if (!violations.empty()) {
        throw Error(ErrorCode::Config, "workflow: " + violations.front().detail);
    }
    return w;
}

nlohmann::json workflow_to_json(const WorkflowSpec& w) {
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : w.vertices) {
        doc["vertices"].push_back({{"id", v.id},
                                   {"name", v.name},
                                   {"app", v.app},
                                   {"work", {{"mean_mi", v.work.mean}, {"std_mi", v.work.std_dev}}},
                                   {"output_mb", v.output_mb},
                                   {"pinned", v.pinned}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : w.edges) {
        doc["edges"].push_back({{"from", w.vertices[e.from].id}, {"to", w.vertices[e.to].id}});
    }
    return doc;
}

} // namespace fogfed
