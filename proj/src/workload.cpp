#include "fogfed/workload.hpp"

#include <algorithm>
#include <cmath>

#include "fogfed/error.hpp"
#include "fogfed/rng.hpp"

namespace fogfed {

std::vector<Arrival> generate_workload(const WorkloadSpec& spec, std::uint64_t seed) {
    if (spec.total_requests < 1) {
        throw Error(ErrorCode::InvalidParameter, "workload needs at least one request");
    }
    if (!(spec.mix >= 0.0 && spec.mix <= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "mix must be in [0,1]");
    }
    if (!(spec.window_ms > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "window_ms must be positive");
    }
    Rng rng(seed);
    std::vector<double> times(spec.total_requests);
    for (double& t : times) {
        t = rng.uniform(0.0, spec.window_ms);
    }
    std::sort(times.begin(), times.end());

    std::vector<Arrival> out(spec.total_requests);
    std::size_t seen[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t a = k % 4;
        const double phase = static_cast<double>(a) / 4.0;
        const double j = static_cast<double>(seen[a]++);
        out[k].id = k;
        out[k].arrival_ms = times[k];
        out[k].app = kAllApps[a];
        out[k].monolithic =
            std::floor((j + 1.0) * spec.mix + phase) - std::floor(j * spec.mix + phase) >= 1.0;
    }
    return out;
}

AppCatalog::AppCatalog(const TemplateOptions& options) {
    for (AppType app : kAllApps) {
        auto w = std::make_shared<const WorkflowSpec>(builtin_app(app, options));
        monoliths_[app] = std::make_shared<const WorkflowSpec>(to_monolithic(*w));
        workflows_[app] = std::move(w);
    }
}

std::shared_ptr<const WorkflowSpec> AppCatalog::workflow(AppType app) const {
    return workflows_.at(app);
}

std::shared_ptr<const WorkflowSpec> AppCatalog::monolithic(AppType app) const {
    return monoliths_.at(app);
}

std::map<std::string, NormalSpec> AppCatalog::work_profiles() const {
    std::map<std::string, NormalSpec> out;
    for (const auto* group : {&workflows_, &monoliths_}) {
        for (const auto& [app, w] : *group) {
            for (const auto& v : w->vertices) {
                out[v.id] = v.work;
            }
        }
    }
    return out;
}

std::map<std::string, double> AppCatalog::input_sizes() const {
    std::map<std::string, double> out;
    for (const auto* group : {&workflows_, &monoliths_}) {
        for (const auto& [app, w] : *group) {
            for (std::size_t v = 0; v < w->size(); ++v) {
                out[w->vertices[v].id] = w->input_mb(v);
            }
        }
    }
    return out;
}

std::vector<Request> make_requests(const std::vector<Arrival>& arrivals, const AppCatalog& apps,
                                   const EtcMatrix& etc, const DeadlinePolicy& policy,
                                   FogId origin) {
    std::map<std::string, double> mean_exec;
    for (const auto& [type, work] : apps.work_profiles()) {
        mean_exec[type] = mean_exec_profile(etc, type);
    }
    std::vector<Request> out;
    out.reserve(arrivals.size());
    for (const auto& a : arrivals) {
        auto w = a.monolithic ? apps.monolithic(a.app) : apps.workflow(a.app);
        Request r = assign_deadlines(std::move(w), a.arrival_ms, policy, mean_exec);
        r.id = a.id;
        r.monolithic = a.monolithic;
        r.origin_fog = origin;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace fogfed
