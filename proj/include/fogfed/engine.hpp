#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fogfed/alloc.hpp"
#include "fogfed/federation.hpp"
#include "fogfed/model.hpp"
#include "fogfed/partition.hpp"

namespace fogfed {

struct EngineConfig {
    PartitionConfig partition;
    AllocMethod allocation = AllocMethod::MaxProbability;
    double ci_level = 0.95;
    /// ProPart sees expected queue waits, not just idle computation latency.
    bool queue_aware_partitioning = true;
    /// Actual service times are the sampled ETC values times this factor.
    double exec_scale = 1.0;
    bool record_trace = false;
    bool record_schedule = false;
};

/// Gateway decisions for one request.
struct RequestTrace {
    std::uint64_t request = 0;
    std::string workflow;            // id of the first vertex, identifies the template
    bool monolithic = false;
    double arrival_ms = 0.0;
    double deadline_ms = 0.0;        // arrival-relative
    PartitionPlan plan;
    std::vector<AllocationDecision> decisions;
};

/// One executed micro-service instance.
struct ExecRecord {
    std::uint64_t request = 0;
    std::size_t vertex = 0;
    FogId fog = 0;
    std::size_t node = 0;
    double ready_ms = 0.0;   // all inputs present
    double start_ms = 0.0;
    double end_ms = 0.0;
};

struct RequestOutcome {
    std::uint64_t id = 0;
    bool monolithic = false;
    double arrival_ms = 0.0;
    double completion_ms = 0.0;
    double deadline_ms = 0.0;   // absolute
    bool met = false;
    std::size_t partitions = 0;
    std::size_t remote_partitions = 0;
};

struct RunResult {
    std::size_t total = 0;
    std::size_t met = 0;
    std::size_t missed = 0;
    double meet_rate = 0.0;
    double avg_makespan_ms = 0.0;   // mean over all requests of completion - arrival
    std::vector<RequestOutcome> outcomes;
    std::vector<RequestTrace> trace;
    std::vector<ExecRecord> schedule;
};

/// Runs `requests` to quiescence on the federation described by `model`.
/// The result is a pure function of (model, requests, config, seed). Every
/// request's gateway is its origin fog; the engine asserts node exclusivity
/// and precedence on every dispatch.
RunResult run_engine(const FederationModel& model, const std::vector<Request>& requests,
                     const EngineConfig& config, std::uint64_t seed);

} // namespace fogfed
