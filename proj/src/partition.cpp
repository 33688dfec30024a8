#include "fogfed/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fogfed/error.hpp"

namespace fogfed {

std::string_view to_string(PartitionMethod m) {
    switch (m) {
    case PartitionMethod::NoPartition: return "none";
    case PartitionMethod::MinCut: return "mincut";
    case PartitionMethod::LeastData: return "leastdata";
    case PartitionMethod::ProPart: return "propart";
    }
    return "?";
}

PartitionMethod parse_partition_method(std::string_view name) {
    for (auto m : {PartitionMethod::NoPartition, PartitionMethod::MinCut, PartitionMethod::LeastData,
                   PartitionMethod::ProPart}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown partitioning method '" + std::string(name) + "'");
}

double sub_deadline(const Request& request, std::span<const std::size_t> vertices) {
    double total = 0.0;
    for (std::size_t v : vertices) {
        total += request.service_slack_ms.at(v);
    }
    return total;
}

namespace {

std::vector<std::size_t> in_topological_order(const WorkflowSpec& w,
                                              std::span<const std::size_t> subset,
                                              const std::vector<std::size_t>& rank) {
    std::vector<std::size_t> out(subset.begin(), subset.end());
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    (void)w;
    return out;
}

std::vector<std::size_t> ranks(const std::vector<std::size_t>& order) {
    std::vector<std::size_t> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        rank[order[i]] = i;
    }
    return rank;
}

Partition make_partition(const WorkflowSpec& w, std::vector<std::size_t> vertices, double p) {
    Partition part;
    part.must_run_local = std::any_of(vertices.begin(), vertices.end(),
                                      [&](std::size_t v) { return w.vertices[v].pinned; });
    part.vertices = std::move(vertices);
    part.est_success = p;
    return part;
}

PartitionPlan bisect_once(const WorkflowSpec& w, PartitionMethod method, const CutResult& cut,
                          const std::vector<std::size_t>& rank) {
    PartitionPlan plan;
    plan.method = method;
    plan.partitions.push_back(make_partition(w, in_topological_order(w, cut.side_s, rank), -1.0));
    plan.partitions.push_back(make_partition(w, in_topological_order(w, cut.side_t, rank), -1.0));
    return plan;
}

} // namespace

PartitionPlan no_partition(const WorkflowSpec& w) {
    PartitionPlan plan;
    plan.method = PartitionMethod::NoPartition;
    plan.partitions.push_back(make_partition(w, topological_order(w), -1.0));
    return plan;
}

PartitionPlan baseline_mincut(const WorkflowSpec& w) {
    if (w.size() < 2) {
        auto plan = no_partition(w);
        plan.method = PartitionMethod::MinCut;
        return plan;
    }
    const auto order = topological_order(w);
    const std::vector<double> unit(w.edges.size(), 1.0);
    return bisect_once(w, PartitionMethod::MinCut, min_cut(w, unit), ranks(order));
}

PartitionPlan baseline_least_data(const WorkflowSpec& w) {
    if (w.size() < 2) {
        auto plan = no_partition(w);
        plan.method = PartitionMethod::LeastData;
        return plan;
    }
    const auto order = topological_order(w);
    std::vector<double> data;
    for (const auto& e : w.edges) {
        data.push_back(e.data_mb);
    }
    return bisect_once(w, PartitionMethod::LeastData, best_prefix_cut(w, order, data), ranks(order));
}

PartitionPlan propart(const WorkflowSpec& w, const Request& request, const PartitionConfig& cfg,
                      const SuccessEstimator& estimator) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "alpha must be in [0,1]");
    }
    const auto order = topological_order(w);
    const auto rank = ranks(order);

    PartitionPlan plan;
    plan.method = PartitionMethod::ProPart;
    const double p_root = estimator.local_probability(w, order, sub_deadline(request, order));
    plan.root_probability = p_root;
    if (p_root >= cfg.alpha || w.size() == 1) {
        plan.root_gate_passed = p_root >= cfg.alpha;
        plan.partitions.push_back(make_partition(w, order, p_root));
        return plan;
    }

    // Cut where the least data crosses; zero-size edges keep a token weight.
    std::vector<double> weights;
    for (const auto& e : w.edges) {
        weights.push_back(std::max(e.data_mb, 1e-6));
    }

    std::function<void(std::vector<std::size_t>, double)> split =
        [&](std::vector<std::size_t> vertices, double parent_p) {
            if (vertices.size() == 1) {
                plan.partitions.push_back(make_partition(w, std::move(vertices), parent_p));
                return;
            }
            const CutResult cut = min_cut_subset(w, vertices, weights);
            SplitRecord rec;
            rec.parent = vertices;
            rec.parent_p = parent_p;
            rec.left = in_topological_order(w, cut.side_s, rank);
            rec.right = in_topological_order(w, cut.side_t, rank);
            rec.left_p = estimator.federation_probability(w, rec.left, sub_deadline(request, rec.left));
            rec.right_p =
                estimator.federation_probability(w, rec.right, sub_deadline(request, rec.right));
            rec.accepted = rec.left_p > parent_p && rec.right_p > parent_p;
            plan.trace.push_back(rec);
            if (!rec.accepted) {
                plan.partitions.push_back(make_partition(w, std::move(vertices), parent_p));
                return;
            }
            split(rec.left, rec.left_p);
            split(rec.right, rec.right_p);
        };
    split(order, p_root);
    return plan;
}

PartitionPlan make_plan(const WorkflowSpec& w, const Request& request, const PartitionConfig& cfg,
                        const SuccessEstimator& estimator) {
    switch (cfg.method) {
    case PartitionMethod::NoPartition: return no_partition(w);
    case PartitionMethod::MinCut: return baseline_mincut(w);
    case PartitionMethod::LeastData: return baseline_least_data(w);
    case PartitionMethod::ProPart: return propart(w, request, cfg, estimator);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown partitioning method");
}

} // namespace fogfed
