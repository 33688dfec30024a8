#include "fogfed/estimator.hpp"

#include <algorithm>

namespace fogfed {

std::vector<std::string> types_of(const WorkflowSpec& w, std::span<const std::size_t> vertices) {
    std::vector<std::string> out;
    out.reserve(vertices.size());
    for (std::size_t v : vertices) {
        out.push_back(w.vertices.at(v).id);
    }
    return out;
}

ModelEstimator::ModelEstimator(const FederationModel& model, FogId local, QueueEstimate queues,
                               bool queue_aware)
    : model_(&model), local_(local), queues_(std::move(queues)), queue_aware_(queue_aware) {}

double ModelEstimator::probability_on(const WorkflowSpec& w, std::span<const std::size_t> vertices,
                                      double deadline_ms, FogId fog) const {
    const auto types = types_of(w, vertices);
    const auto pmf = model_->chain(types, fog);
    const double wait = queue_aware_ ? queues_.wait(fog) : 0.0;
    return prob_on_time(*pmf, deadline_ms - snap_to_grid(wait, pmf->bin_width()));
}

double ModelEstimator::local_probability(const WorkflowSpec& w,
                                         std::span<const std::size_t> vertices,
                                         double deadline_ms) const {
    return probability_on(w, vertices, deadline_ms, local_);
}

double ModelEstimator::federation_probability(const WorkflowSpec& w,
                                              std::span<const std::size_t> vertices,
                                              double deadline_ms) const {
    double best = probability_on(w, vertices, deadline_ms, local_);
    for (FogId g : model_->topology().neighbors(local_)) {
        best = std::max(best, probability_on(w, vertices, deadline_ms, g));
    }
    return best;
}

} // namespace fogfed
