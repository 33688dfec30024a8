#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogfed/dist.hpp"
#include "fogfed/federation.hpp"
#include "fogfed/model.hpp"
#include "fogfed/partition.hpp"

namespace fogfed {

enum class AllocMethod { MaxProbability, Mect, Mcc, NoFederation };

std::string_view to_string(AllocMethod m);
AllocMethod parse_alloc_method(std::string_view name);

enum class DecisionReason {
    LocalDefault,      // no candidate fog to consider
    LocalHigherP,      // no neighbor beats the local probability
    LocalCiOverlap,    // better neighbors exist but every CI overlaps the local one
    RemoteCiDisjoint,  // neighbor with higher P and a disjoint CI
    ForcedLocalPinned, // partition holds a location-pinned service
    BaselineLocal,     // MECT / MCC picked the local fog
    BaselineRemote,    // MECT / MCC picked a neighbor
};

std::string_view to_string(DecisionReason r);

/// Expected queueing delay per fog, in ms.
struct QueueEstimate {
    std::vector<double> wait_ms;

    double wait(FogId fog) const { return fog < wait_ms.size() ? wait_ms[fog] : 0.0; }
    static QueueEstimate idle(std::size_t fog_count) { return {std::vector<double>(fog_count, 0.0)}; }
};

struct CandidateRecord {
    FogId fog = 0;
    std::size_t hops = 0;        // hops the partition's input travels
    double probability = 0.0;    // MR: P(on time); baselines: unused
    CiInterval ci;               // MR only
    double mean_ms = 0.0;        // mean end-to-end (MR) or expected completion (baselines)
    double score = 0.0;          // baselines: completion (MECT) or certainty (MCC)
};

struct AllocationDecision {
    std::size_t partition = 0;
    FogId local = 0;
    FogId chosen = 0;
    DecisionReason reason = DecisionReason::LocalDefault;
    double deadline_ms = 0.0;    // arrival-relative deadline of the partition
    CandidateRecord local_record;
    std::vector<CandidateRecord> candidates;   // neighbors, in topology order
    std::vector<FogId> examined;               // MR: F in the order it was walked
    std::vector<FogId> overlap_blocked;        // MR: members of F rejected for CI overlap
};

/// Work unit handed to an allocator: one partition of a workflow.
struct AllocationUnit {
    const WorkflowSpec* workflow = nullptr;
    const Partition* partition = nullptr;
    std::size_t index = 0;
    double deadline_ms = 0.0;       // arrival-relative
    FogId source_fog = 0;           // where the unit's input data currently sits

    std::vector<std::string> types() const;
    std::string source_type() const;
};

/// Maximum Probability allocation for every partition of `plan`, in order.
/// Partition k's input is assumed to sit on the fog chosen for partition k-1
/// (the receiving fog for k = 0).
std::vector<AllocationDecision> allocate_mr(const PartitionPlan& plan, const WorkflowSpec& w,
                                            const Request& request, FogId local,
                                            const FederationModel& model,
                                            const QueueEstimate& queues, double ci_level = 0.95);

/// MR for a single unit.
AllocationDecision allocate_mr_unit(const AllocationUnit& unit, FogId local,
                                    const FederationModel& model, const QueueEstimate& queues,
                                    double ci_level = 0.95);

/// Minimum expected completion time over the local fog and its neighbors,
/// computation only: queue wait + sum of ETC means.
AllocationDecision allocate_mect(const AllocationUnit& unit, FogId local,
                                 const FederationModel& model, const QueueEstimate& queues);

/// Maximum certainty (deadline - expected completion) among fogs with
/// positive certainty; local when none qualifies.
AllocationDecision allocate_mcc(const AllocationUnit& unit, FogId local,
                                const FederationModel& model, const QueueEstimate& queues);

AllocationDecision allocate_no_federation(const AllocationUnit& unit, FogId local);

/// Runs `method` over every partition of `plan` in precedence order.
std::vector<AllocationDecision> allocate(AllocMethod method, const PartitionPlan& plan,
                                         const WorkflowSpec& w, const Request& request,
                                         FogId local, const FederationModel& model,
                                         const QueueEstimate& queues, double ci_level = 0.95);

} // namespace fogfed
