#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogfed/model.hpp"

namespace fogfed {

struct CutResult {
    std::vector<std::size_t> side_s;     // ancestor-closed, holds the entries
    std::vector<std::size_t> side_t;     // holds the exits
    std::vector<std::size_t> cut_edges;  // indices into WorkflowSpec::edges
    double cut_weight = 0.0;
};

/// Exact minimum-weight s-t cut restricted to ancestor-closed bisections.
/// `edge_weights[k]` weights `w.edges[k]` and must be positive. Multiple
/// entries and exits are tied to a virtual source and sink. Among equal-weight
/// cuts the one with the smallest source side is returned. Throws
/// NotPartitionable for a single vertex.
CutResult min_cut(const WorkflowSpec& w, std::span<const double> edge_weights);

/// min_cut on the subgraph induced by `subset` (vertex indices of `w`).
CutResult min_cut_subset(const WorkflowSpec& w, std::span<const std::size_t> subset,
                         std::span<const double> edge_weights);

/// Best cut among the topological prefixes of `subset` (first k vertices in
/// topological order vs the rest, k = 1..n-1); ties go to the smallest k.
CutResult best_prefix_cut(const WorkflowSpec& w, std::span<const std::size_t> subset,
                          std::span<const double> edge_weights);

enum class PartitionMethod { NoPartition, MinCut, LeastData, ProPart };

std::string_view to_string(PartitionMethod m);
PartitionMethod parse_partition_method(std::string_view name);

struct PartitionConfig {
    double alpha = 0.5;
    PartitionMethod method = PartitionMethod::ProPart;
};

struct Partition {
    std::vector<std::size_t> vertices;   // topological order
    bool must_run_local = false;         // holds a pinned vertex
    double est_success = -1.0;           // negative when not estimated
};

/// One decision of the recursive partitioner.
struct SplitRecord {
    std::vector<std::size_t> parent;
    double parent_p = 0.0;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    double left_p = 0.0;
    double right_p = 0.0;
    bool accepted = false;
};

struct PartitionPlan {
    PartitionMethod method = PartitionMethod::NoPartition;
    std::vector<Partition> partitions;   // precedence order
    std::vector<SplitRecord> trace;
    /// P(omega) on the receiving fog; negative when the method did not compute it.
    double root_probability = -1.0;
    /// True when the alpha gate kept the workflow whole.
    bool root_gate_passed = false;
};

/// Success-probability oracle used by ProPart. Both members receive a vertex
/// subset of the workflow (topological order) and its arrival-relative deadline.
class SuccessEstimator {
public:
    virtual ~SuccessEstimator() = default;
    /// Probability of finishing the subset on the receiving fog.
    virtual double local_probability(const WorkflowSpec& w, std::span<const std::size_t> vertices,
                                     double deadline_ms) const = 0;
    /// Best probability over the fogs the subset could be placed on.
    virtual double federation_probability(const WorkflowSpec& w,
                                          std::span<const std::size_t> vertices,
                                          double deadline_ms) const = 0;
};

/// Sum of the members' arrival-relative slacks.
double sub_deadline(const Request& request, std::span<const std::size_t> vertices);

/// Recursive probabilistic partitioning. The whole workflow is evaluated on
/// the receiving fog first; it is split only when that probability is below
/// alpha, and a split is kept only while both halves beat their parent.
PartitionPlan propart(const WorkflowSpec& w, const Request& request, const PartitionConfig& cfg,
                      const SuccessEstimator& estimator);

/// One unit-weight min-cut bisection.
PartitionPlan baseline_mincut(const WorkflowSpec& w);

/// One bisection at the topological prefix with the least crossing data.
PartitionPlan baseline_least_data(const WorkflowSpec& w);

PartitionPlan no_partition(const WorkflowSpec& w);

/// Dispatches on cfg.method. The estimator is only consulted by ProPart.
PartitionPlan make_plan(const WorkflowSpec& w, const Request& request, const PartitionConfig& cfg,
                        const SuccessEstimator& estimator);

} // namespace fogfed
