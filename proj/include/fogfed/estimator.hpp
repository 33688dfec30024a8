#pragma once

#include <span>
#include <string>
#include <vector>

#include "fogfed/alloc.hpp"
#include "fogfed/federation.hpp"
#include "fogfed/partition.hpp"

namespace fogfed {

/// Micro-service type keys of `vertices`, in the given order.
std::vector<std::string> types_of(const WorkflowSpec& w, std::span<const std::size_t> vertices);

/// On-time probability of a subset from computation latency only (no ETT).
/// With `queue_aware` the completion distribution is shifted by each fog's
/// expected queue wait. The federation candidates are the receiving fog and
/// its neighbors, which is where the allocator can place work.
class ModelEstimator final : public SuccessEstimator {
public:
    ModelEstimator(const FederationModel& model, FogId local, QueueEstimate queues,
                   bool queue_aware = true);

    double local_probability(const WorkflowSpec& w, std::span<const std::size_t> vertices,
                             double deadline_ms) const override;
    double federation_probability(const WorkflowSpec& w, std::span<const std::size_t> vertices,
                                  double deadline_ms) const override;

    double probability_on(const WorkflowSpec& w, std::span<const std::size_t> vertices,
                          double deadline_ms, FogId fog) const;

private:
    const FederationModel* model_;
    FogId local_;
    QueueEstimate queues_;
    bool queue_aware_;
};

} // namespace fogfed
