#include "fogfed/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fogfed/error.hpp"
#include "fogfed/suites.hpp"

namespace fogfed {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::Config, field + ": " + what);
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) {
        fail(field, what);
    }
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> known) {
    for (const auto& [key, value] : obj.items()) {
        if (known.count(key) == 0) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

double number(const json& v, const std::string& path) {
    require(v.is_number(), path, "expected a number");
    return v.get<double>();
}

long integer(const json& v, const std::string& path) {
    require(v.is_number_integer(), path, "expected an integer");
    return v.get<long>();
}

bool boolean(const json& v, const std::string& path) {
    require(v.is_boolean(), path, "expected true or false");
    return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
    require(v.is_string(), path, "expected a string");
    return v.get<std::string>();
}

template <typename F>
void maybe(const json& obj, const std::string& key, const std::string& path, F&& apply) {
    if (obj.contains(key)) {
        apply(obj.at(key), path.empty() ? key : path + "." + key);
    }
}

void read_grid(const json& g, const std::string& path, GridSpec& out) {
    reject_unknown(g, path, {"w", "h", "origin", "node_count"});
    maybe(g, "w", path, [&](const json& v, const std::string& p) { out.width = static_cast<int>(integer(v, p)); });
    maybe(g, "h", path, [&](const json& v, const std::string& p) { out.height = static_cast<int>(integer(v, p)); });
    maybe(g, "node_count", path, [&](const json& v, const std::string& p) { out.node_count = static_cast<int>(integer(v, p)); });
    maybe(g, "origin", path, [&](const json& v, const std::string& p) {
        require(v.is_array() && v.size() == 2, p, "expected [x, y]");
        out.origin_x = static_cast<int>(integer(v[0], p + "[0]"));
        out.origin_y = static_cast<int>(integer(v[1], p + "[1]"));
    });
}

MethodSpec read_method(const json& m, const std::string& path) {
    require(m.is_object(), path, "expected an object");
    reject_unknown(m, path, {"label", "partition", "allocation"});
    MethodSpec out;
    require(m.contains("partition"), path + ".partition", "missing");
    require(m.contains("allocation"), path + ".allocation", "missing");
    try {
        out.partition = parse_partition_method(text(m.at("partition"), path + ".partition"));
        out.allocation = parse_alloc_method(text(m.at("allocation"), path + ".allocation"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) {
            throw;
        }
        fail(path, e.detail());
    }
    out.label = m.contains("label") ? text(m.at("label"), path + ".label")
                                    : std::string(to_string(out.partition)) + "+" +
                                          std::string(to_string(out.allocation));
    return out;
}

} // namespace

GridSpec degree_grid(int degree) {
    GridSpec g;
    switch (degree) {
    case 1: g.width = 2; g.height = 1; g.origin_x = 0; g.origin_y = 0; break;
    case 2: g.width = 3; g.height = 1; g.origin_x = 1; g.origin_y = 0; break;
    case 3: g.width = 3; g.height = 2; g.origin_x = 1; g.origin_y = 0; break;
    case 4: g.width = 3; g.height = 3; g.origin_x = 1; g.origin_y = 1; break;
    default: fail("degrees", "degree must be between 1 and 4, got " + std::to_string(degree));
    }
    return g;
}

FogId grid_origin(const GridSpec& g, const FederationTopology& topology) {
    const int x = g.origin_x.value_or(g.width / 2);
    const int y = g.origin_y.value_or(g.height / 2);
    const auto id = topology.at(x, y);
    require(id.has_value(), "grid.origin", "outside the grid");
    return *id;
}

void validate(const Scenario& s) {
    require(!s.name.empty(), "name", "must not be empty");
    require(s.name.find_first_of(",\"\n") == std::string::npos, "name",
            "must not contain commas, quotes or newlines");
    require(s.grid.width >= 1 && s.grid.height >= 1, "grid", "w and h must be >= 1");
    require(s.grid.node_count >= 1, "grid.node_count", "must be >= 1");
    const int ox = s.grid.origin_x.value_or(s.grid.width / 2);
    const int oy = s.grid.origin_y.value_or(s.grid.height / 2);
    require(ox >= 0 && ox < s.grid.width && oy >= 0 && oy < s.grid.height, "grid.origin",
            "outside the grid");
    for (int d : s.degrees) {
        degree_grid(d);
    }
    require(s.link.bandwidth_mbps > 0.0, "link.bandwidth_mbps", "must be positive");
    require(s.link.per_hop_latency.mean >= 0.0 && s.link.per_hop_latency.std_dev >= 0.0,
            "link", "must be non-negative");
    require(s.bin_width_ms > 0.0, "bin_width_ms", "must be positive");
    require(s.workload.mix >= 0.0 && s.workload.mix <= 1.0, "workload.mix", "must be in [0,1]");
    require(s.workload.window_ms > 0.0, "workload.window_ms", "must be positive");
    require(!s.request_counts.empty(), "workload.requests", "must not be empty");
    for (auto n : s.request_counts) {
        require(n >= 1, "workload.requests", "every count must be >= 1");
    }
    require(!s.methods.empty(), "methods", "must not be empty");
    std::set<std::string> labels;
    for (const auto& m : s.methods) {
        require(!m.label.empty() && m.label.find_first_of(",\"\n") == std::string::npos,
                "methods.label", "must be non-empty without commas, quotes or newlines");
        require(labels.insert(m.label).second, "methods.label", "duplicate label '" + m.label + "'");
    }
    require(s.alpha >= 0.0 && s.alpha <= 1.0, "alpha", "must be in [0,1]");
    require(s.ci_level > 0.0 && s.ci_level < 1.0, "ci_level", "must be in (0,1)");
    require(s.deadlines.epsilon_ms >= 0.0 && s.deadlines.mean_comm_delay_ms >= 0.0, "deadline",
            "must be non-negative");
    require(s.templates.reference_mips > 0.0, "reference_mips", "must be positive");
    require(s.exec_scale > 0.0, "exec_scale", "must be positive");
    require(s.repetitions >= 1 && s.repetitions < (1u << 24), "repetitions",
            "must be in [1, 2^24)");
}

Scenario scenario_from_json(const json& doc) {
    require(doc.is_object(), "<root>", "expected an object");
    reject_unknown(doc, "", {"suite", "name", "grid", "degrees", "link", "bin_width_ms",
                             "reference_mips", "pin_capture", "workload", "methods", "alpha",
                             "ci_level", "deadline", "queue_aware_partitioning", "exec_scale",
                             "repetitions", "seed"});
    Scenario s;
    maybe(doc, "suite", "", [&](const json& v, const std::string& p) {
        const auto name = text(v, p);
        try {
            s = builtin_suite(name);
        } catch (const Error& e) {
            fail(p, e.detail());
        }
    });
    maybe(doc, "name", "", [&](const json& v, const std::string& p) { s.name = text(v, p); });
    maybe(doc, "grid", "", [&](const json& v, const std::string& p) {
        require(v.is_object(), p, "expected an object");
        read_grid(v, p, s.grid);
    });
    maybe(doc, "degrees", "", [&](const json& v, const std::string& p) {
        require(v.is_array(), p, "expected an array");
        s.degrees.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            s.degrees.push_back(static_cast<int>(integer(v[i], p + "[" + std::to_string(i) + "]")));
        }
    });
    maybe(doc, "link", "", [&](const json& v, const std::string& p) {
        require(v.is_object(), p, "expected an object");
        reject_unknown(v, p, {"bandwidth_mbps", "hop_mean_ms", "hop_std_ms"});
        maybe(v, "bandwidth_mbps", p, [&](const json& x, const std::string& q) { s.link.bandwidth_mbps = number(x, q); });
        maybe(v, "hop_mean_ms", p, [&](const json& x, const std::string& q) { s.link.per_hop_latency.mean = number(x, q); });
        maybe(v, "hop_std_ms", p, [&](const json& x, const std::string& q) { s.link.per_hop_latency.std_dev = number(x, q); });
    });
    maybe(doc, "bin_width_ms", "", [&](const json& v, const std::string& p) { s.bin_width_ms = number(v, p); });
    maybe(doc, "workload", "", [&](const json& v, const std::string& p) {
        require(v.is_object(), p, "expected an object");
        reject_unknown(v, p, {"requests", "mix", "window_ms"});
        maybe(v, "requests", p, [&](const json& x, const std::string& q) {
            require(x.is_array() || x.is_number_integer(), q, "expected an integer or an array");
            s.request_counts.clear();
            const json list = x.is_array() ? x : json::array({x});
            for (std::size_t i = 0; i < list.size(); ++i) {
                const long n = integer(list[i], q + "[" + std::to_string(i) + "]");
                require(n >= 1, q, "every count must be >= 1");
                s.request_counts.push_back(static_cast<std::size_t>(n));
            }
        });
        maybe(v, "mix", p, [&](const json& x, const std::string& q) { s.workload.mix = number(x, q); });
        maybe(v, "window_ms", p, [&](const json& x, const std::string& q) { s.workload.window_ms = number(x, q); });
    });
    maybe(doc, "methods", "", [&](const json& v, const std::string& p) {
        require(v.is_array(), p, "expected an array");
        s.methods.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            s.methods.push_back(read_method(v[i], p + "[" + std::to_string(i) + "]"));
        }
    });
    maybe(doc, "alpha", "", [&](const json& v, const std::string& p) { s.alpha = number(v, p); });
    maybe(doc, "ci_level", "", [&](const json& v, const std::string& p) { s.ci_level = number(v, p); });
    maybe(doc, "deadline", "", [&](const json& v, const std::string& p) {
        require(v.is_object(), p, "expected an object");
        reject_unknown(v, p, {"epsilon_ms", "comm_delay_ms"});
        maybe(v, "epsilon_ms", p, [&](const json& x, const std::string& q) { s.deadlines.epsilon_ms = number(x, q); });
        maybe(v, "comm_delay_ms", p, [&](const json& x, const std::string& q) { s.deadlines.mean_comm_delay_ms = number(x, q); });
    });
    maybe(doc, "reference_mips", "", [&](const json& v, const std::string& p) { s.templates.reference_mips = number(v, p); });
    maybe(doc, "pin_capture", "", [&](const json& v, const std::string& p) { s.templates.pin_capture = boolean(v, p); });
    maybe(doc, "queue_aware_partitioning", "", [&](const json& v, const std::string& p) { s.queue_aware_partitioning = boolean(v, p); });
    maybe(doc, "exec_scale", "", [&](const json& v, const std::string& p) { s.exec_scale = number(v, p); });
    maybe(doc, "repetitions", "", [&](const json& v, const std::string& p) {
        const long n = integer(v, p);
        require(n >= 1, p, "must be >= 1");
        s.repetitions = static_cast<std::size_t>(n);
    });
    maybe(doc, "seed", "", [&](const json& v, const std::string& p) {
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long>() >= 0), p,
                "expected a non-negative integer");
        s.master_seed = v.get<std::uint64_t>();
    });
    validate(s);
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    json grid{{"w", s.grid.width}, {"h", s.grid.height}, {"node_count", s.grid.node_count}};
    if (s.grid.origin_x && s.grid.origin_y) {
        grid["origin"] = {*s.grid.origin_x, *s.grid.origin_y};
    }
    doc["grid"] = grid;
    doc["degrees"] = s.degrees;
    doc["link"] = {{"bandwidth_mbps", s.link.bandwidth_mbps},
                   {"hop_mean_ms", s.link.per_hop_latency.mean},
                   {"hop_std_ms", s.link.per_hop_latency.std_dev}};
    doc["bin_width_ms"] = s.bin_width_ms;
    doc["workload"] = {{"requests", s.request_counts},
                       {"mix", s.workload.mix},
                       {"window_ms", s.workload.window_ms}};
    json methods = json::array();
    for (const auto& m : s.methods) {
        methods.push_back({{"label", m.label},
                           {"partition", std::string(to_string(m.partition))},
                           {"allocation", std::string(to_string(m.allocation))}});
    }
    doc["methods"] = methods;
    doc["alpha"] = s.alpha;
    doc["ci_level"] = s.ci_level;
    doc["deadline"] = {{"epsilon_ms", s.deadlines.epsilon_ms},
                       {"comm_delay_ms", s.deadlines.mean_comm_delay_ms}};
    doc["reference_mips"] = s.templates.reference_mips;
    doc["pin_capture"] = s.templates.pin_capture;
    doc["queue_aware_partitioning"] = s.queue_aware_partitioning;
    doc["exec_scale"] = s.exec_scale;
    doc["repetitions"] = s.repetitions;
    doc["seed"] = s.master_seed;
    return doc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string textual = buf.str();
    json doc;
    try {
        doc = json::parse(textual);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line and column.
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < textual.size(); ++i) {
            if (textual[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::Parse, path + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": invalid JSON");
    }
    try {
        return scenario_from_json(doc);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.detail());
    }
}

} // namespace fogfed
