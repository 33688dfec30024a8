#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogfed/dist.hpp"

namespace fogfed {

enum class AppType { Fire, HAR, Oil, AIE };

inline constexpr AppType kAllApps[] = {AppType::Fire, AppType::HAR, AppType::Oil, AppType::AIE};

std::string_view to_string(AppType app);
AppType parse_app(std::string_view tag);

/// One vertex of a workflow. `id` doubles as the micro-service type key used
/// to index the ETC and ETT matrices.
struct MicroServiceSpec {
    std::string id;
    std::string app;
    std::string name;
    NormalSpec work;        // million instructions
    double output_mb = 0.0;
    bool pinned = false;    // must execute on the fog that received the request
};

struct WorkflowEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    double data_mb = 0.0;
};

/// DAG of micro-services. Edges refer to vertices by index.
struct WorkflowSpec {
    std::vector<MicroServiceSpec> vertices;
    std::vector<WorkflowEdge> edges;

    std::size_t size() const noexcept { return vertices.size(); }
    std::optional<std::size_t> index_of(std::string_view id) const;
    std::vector<std::size_t> predecessors(std::size_t v) const;
    std::vector<std::size_t> successors(std::size_t v) const;
    bool is_entry(std::size_t v) const;
    bool is_exit(std::size_t v) const;

    /// Data a vertex needs before it can run: the sum of incoming edge data,
    /// or its own output size for entry vertices (stand-in for the sensor
    /// payload that arrives with the request).
    double input_mb(std::size_t v) const;
};

enum class ViolationKind {
    Empty,
    DuplicateId,
    BadEdge,
    Cycle,
    Disconnected,
    EdgeDataMismatch,
    InvalidWork,
    PinnedNonEntry,
};

struct Violation {
    ViolationKind kind;
    std::string detail;
};

/// Empty result means every WorkflowSpec invariant holds.
std::vector<Violation> validate_dag(const WorkflowSpec& w);

/// Kahn's algorithm; ready vertices are released in ascending id order.
/// Throws NotADag on a cycle.
std::vector<std::size_t> topological_order(const WorkflowSpec& w);

/// Per-template knobs. Table values are the GPU-column timings, expressed in
/// MI on a reference fog of `reference_mips`.
struct TemplateOptions {
    double reference_mips = 2000.0;
    bool pin_capture = true;
};

/// Application-level work profile in MI (whole application, all services).
NormalSpec app_work_profile(AppType app, double reference_mips = 2000.0);

WorkflowSpec builtin_app(AppType app, const TemplateOptions& options = {});

/// Collapses a workflow into one vertex whose work is the independent-normal
/// sum of the components.
WorkflowSpec to_monolithic(const WorkflowSpec& w);

struct DeadlinePolicy {
    double epsilon_ms = 50.0;
    double mean_comm_delay_ms = 20.0;
};

struct Request {
    std::uint64_t id = 0;
    double arrival_ms = 0.0;
    bool monolithic = false;
    std::shared_ptr<const WorkflowSpec> workflow;
    std::size_t origin_fog = 0;
    /// Arrival-relative slack per vertex (E_i + epsilon + d_c).
    std::vector<double> service_slack_ms;
    /// Absolute per-vertex deadlines (arrival + slack).
    std::vector<double> service_deadline_ms;
    double workflow_deadline_ms = 0.0;

    double relative_deadline_ms() const { return workflow_deadline_ms - arrival_ms; }
};

/// Applies `deadline_i = arrival + E_i + epsilon + d_c`, with the workflow
/// deadline being arrival plus the sum of the per-service slacks.
Request assign_deadlines(std::shared_ptr<const WorkflowSpec> w, double arrival_ms,
                         const DeadlinePolicy& policy,
                         const std::map<std::string, double>& mean_exec_ms);

} // namespace fogfed
