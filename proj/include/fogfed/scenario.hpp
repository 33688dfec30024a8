#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fogfed/alloc.hpp"
#include "fogfed/federation.hpp"
#include "fogfed/model.hpp"
#include "fogfed/partition.hpp"
#include "fogfed/workload.hpp"

namespace fogfed {

struct MethodSpec {
    std::string label;
    PartitionMethod partition = PartitionMethod::ProPart;
    AllocMethod allocation = AllocMethod::MaxProbability;
};

struct GridSpec {
    int width = 3;
    int height = 3;
    std::optional<int> origin_x;   // default: center column
    std::optional<int> origin_y;   // default: center row
    int node_count = 8;
};

struct Scenario {
    std::string name = "custom";
    GridSpec grid;
    /// Non-empty: sweep over the degree-d topologies instead of `grid`.
    std::vector<int> degrees;
    LinkProfile link;
    double bin_width_ms = 1.0;
    WorkloadSpec workload;
    std::vector<std::size_t> request_counts{100};
    std::vector<MethodSpec> methods{{"mr", PartitionMethod::ProPart, AllocMethod::MaxProbability}};
    double alpha = 0.5;
    double ci_level = 0.95;
    DeadlinePolicy deadlines;
    TemplateOptions templates;
    bool queue_aware_partitioning = true;
    double exec_scale = 1.0;
    std::size_t repetitions = 30;
    std::uint64_t master_seed = 1;
};

/// Throws Config naming the offending field.
void validate(const Scenario& s);

/// Grid of `degree` fogs around the origin: 1x2, 1x3, 3 wide by 2 high, 3x3,
/// with the origin placed so that it has exactly `degree` neighbors.
GridSpec degree_grid(int degree);

/// Origin fog of a grid (its default is the center).
FogId grid_origin(const GridSpec& g, const FederationTopology& topology);

/// Reads a scenario document. A "suite" key starts from that built-in preset
/// and the remaining keys override it. Unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

/// Loads and validates a scenario file. Parse failures report line and column.
Scenario load_scenario(const std::string& path);

} // namespace fogfed
