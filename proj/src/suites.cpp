#include "fogfed/suites.hpp"

#include <sstream>

#include "fogfed/error.hpp"

namespace fogfed {

namespace {

// Arrival windows are short enough that the receiving fog is oversubscribed
// across the load range; with the default 100 s window no load saturates it.
constexpr double kWorkflowWindowMs = 20000.0;
constexpr double kMonolithicWindowMs = 30000.0;

std::vector<MethodSpec> allocators(PartitionMethod partition, bool with_nofed = true) {
    std::vector<MethodSpec> out{{"mr", partition, AllocMethod::MaxProbability},
                                {"mect", partition, AllocMethod::Mect},
                                {"mcc", partition, AllocMethod::Mcc}};
    if (with_nofed) {
        out.push_back({"nofed", partition, AllocMethod::NoFederation});
    }
    return out;
}

Scenario base(const std::string& name, double window_ms, double mix,
              std::vector<std::size_t> loads) {
    Scenario s;
    s.name = name;
    s.workload.window_ms = window_ms;
    s.workload.mix = mix;
    s.request_counts = std::move(loads);
    return s;
}

Scenario make(const std::string& name) {
    const std::vector<std::size_t> workflow_loads{100, 200, 300, 400};
    const std::vector<std::size_t> monolithic_loads{400, 600, 800, 1000};
    if (name == "fig5_partitioning") {
        auto s = base(name, kWorkflowWindowMs, 0.0, workflow_loads);
        s.methods = {{"none", PartitionMethod::NoPartition, AllocMethod::MaxProbability},
                     {"mincut", PartitionMethod::MinCut, AllocMethod::MaxProbability},
                     {"leastdata", PartitionMethod::LeastData, AllocMethod::MaxProbability},
                     {"propart", PartitionMethod::ProPart, AllocMethod::MaxProbability}};
        return s;
    }
    if (name == "fig6_alloc_workflows" || name == "fig9_makespan_workflows") {
        auto s = base(name, kWorkflowWindowMs, 0.0, workflow_loads);
        s.methods = allocators(PartitionMethod::ProPart);
        return s;
    }
    if (name == "fig7_alloc_monolithic" || name == "fig10_makespan_monolithic") {
        auto s = base(name, kMonolithicWindowMs, 1.0, monolithic_loads);
        s.methods = allocators(PartitionMethod::ProPart);
        return s;
    }
    if (name == "fig8_mixed") {
        auto s = base(name, kMonolithicWindowMs, 0.5, monolithic_loads);
        s.methods = allocators(PartitionMethod::ProPart);
        return s;
    }
    if (name == "fig11_scaling_workflows") {
        auto s = base(name, kWorkflowWindowMs, 0.0, {200, 400});
        s.degrees = {1, 2, 3, 4};
        s.methods = allocators(PartitionMethod::ProPart, false);
        return s;
    }
    if (name == "fig12_scaling_monolithic") {
        auto s = base(name, kMonolithicWindowMs, 1.0, {1000});
        s.degrees = {1, 2, 3, 4};
        s.methods = allocators(PartitionMethod::ProPart, false);
        return s;
    }
    throw Error(ErrorCode::Config, "unknown suite '" + name + "'");
}

std::string join(const auto& items) {
    std::ostringstream out;
    bool first = true;
    for (const auto& x : items) {
        out << (first ? "" : ",") << x;
        first = false;
    }
    return out.str();
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "fig5_partitioning",       "fig6_alloc_workflows",    "fig7_alloc_monolithic",
        "fig8_mixed",              "fig9_makespan_workflows", "fig10_makespan_monolithic",
        "fig11_scaling_workflows", "fig12_scaling_monolithic"};
    return names;
}

Scenario builtin_suite(const std::string& name) {
    return make(name);
}

std::string describe_suites() {
    std::ostringstream out;
    for (const auto& name : suite_names()) {
        const Scenario s = make(name);
        std::vector<std::string> methods;
        for (const auto& m : s.methods) {
            methods.push_back(m.label + "=" + std::string(to_string(m.partition)) + "+" +
                              std::string(to_string(m.allocation)));
        }
        out << name << "\n";
        out << "  methods:     " << join(methods) << "\n";
        out << "  loads:       " << join(s.request_counts) << "\n";
        out << "  mix:         " << s.workload.mix << "\n";
        if (s.degrees.empty()) {
            out << "  topology:    " << s.grid.width << "x" << s.grid.height << " grid, center origin\n";
        } else {
            out << "  degrees:     " << join(s.degrees) << "\n";
        }
        out << "  window_ms:   " << s.workload.window_ms << "\n";
        out << "  repetitions: " << s.repetitions << "\n";
    }
    return out.str();
}

} // namespace fogfed
