#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "fogfed/federation.hpp"
#include "fogfed/model.hpp"

namespace fogfed {

struct WorkloadSpec {
    std::size_t total_requests = 100;
    double mix = 0.0;              // fraction of monolithic requests
    double window_ms = 100000.0;   // arrivals spread over [0, window_ms)
};

struct Arrival {
    std::uint64_t id = 0;
    double arrival_ms = 0.0;
    AppType app = AppType::Fire;
    bool monolithic = false;
};

/// Poisson arrivals conditioned on the request count: the sorted order
/// statistics of `total_requests` uniform draws over the window. Request k
/// (in arrival order) belongs to app k mod 4; within each app the monolithic
/// flag follows a phase-shifted Bresenham sequence of rate `mix`, so every
/// app carries its share of monolithic requests.
std::vector<Arrival> generate_workload(const WorkloadSpec& spec, std::uint64_t seed);

/// Workflow and monolithic templates for the four apps.
class AppCatalog {
public:
    explicit AppCatalog(const TemplateOptions& options = {});

    std::shared_ptr<const WorkflowSpec> workflow(AppType app) const;
    std::shared_ptr<const WorkflowSpec> monolithic(AppType app) const;

    /// Work profile of every micro-service type, monolithic variants included.
    std::map<std::string, NormalSpec> work_profiles() const;
    /// Input data size of every type (see WorkflowSpec::input_mb).
    std::map<std::string, double> input_sizes() const;

private:
    std::map<AppType, std::shared_ptr<const WorkflowSpec>> workflows_;
    std::map<AppType, std::shared_ptr<const WorkflowSpec>> monoliths_;
};

/// Turns arrivals into requests at `origin` with deadlines from the ETC row means.
std::vector<Request> make_requests(const std::vector<Arrival>& arrivals, const AppCatalog& apps,
                                   const EtcMatrix& etc, const DeadlinePolicy& policy,
                                   FogId origin);

} // namespace fogfed
