#include "fogfed/alloc.hpp"

#include <algorithm>

#include "fogfed/error.hpp"

namespace fogfed {

std::string_view to_string(AllocMethod m) {
    switch (m) {
    case AllocMethod::MaxProbability: return "mr";
    case AllocMethod::Mect: return "mect";
    case AllocMethod::Mcc: return "mcc";
    case AllocMethod::NoFederation: return "nofed";
    }
    return "?";
}

AllocMethod parse_alloc_method(std::string_view name) {
    for (auto m : {AllocMethod::MaxProbability, AllocMethod::Mect, AllocMethod::Mcc,
                   AllocMethod::NoFederation}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown allocation method '" + std::string(name) + "'");
}

std::string_view to_string(DecisionReason r) {
    switch (r) {
    case DecisionReason::LocalDefault: return "Local-Default";
    case DecisionReason::LocalHigherP: return "Local-Higher-P";
    case DecisionReason::LocalCiOverlap: return "Local-CI-Overlap";
    case DecisionReason::RemoteCiDisjoint: return "Remote-CI-Disjoint";
    case DecisionReason::ForcedLocalPinned: return "Forced-Local-Pinned";
    case DecisionReason::BaselineLocal: return "Baseline-Local";
    case DecisionReason::BaselineRemote: return "Baseline-Remote";
    }
    return "?";
}

std::vector<std::string> AllocationUnit::types() const {
    std::vector<std::string> out;
    out.reserve(partition->vertices.size());
    for (std::size_t v : partition->vertices) {
        out.push_back(workflow->vertices[v].id);
    }
    return out;
}

std::string AllocationUnit::source_type() const {
    return workflow->vertices[partition->vertices.front()].id;
}

namespace {

CandidateRecord evaluate_mr(const AllocationUnit& unit, const std::vector<std::string>& types,
                            FogId fog, const FederationModel& model, const QueueEstimate& queues,
                            double ci_level) {
    CandidateRecord rec;
    rec.fog = fog;
    rec.hops = hop_distance(model.topology(), unit.source_fog, fog);
    // Equivalent to evaluating shift(e2e, wait) without copying the memoized PMF.
    const auto e2e = model.end_to_end(types, fog, rec.hops);
    const double wait = snap_to_grid(queues.wait(fog), e2e->bin_width());
    rec.probability = prob_on_time(*e2e, unit.deadline_ms - wait);
    rec.ci = central_ci(*e2e, ci_level);
    rec.ci.lo += wait;
    rec.ci.hi += wait;
    rec.mean_ms = e2e->mean() + wait;
    return rec;
}

CandidateRecord evaluate_baseline(const std::vector<std::string>& types, FogId fog,
                                  const FederationModel& model, const QueueEstimate& queues) {
    CandidateRecord rec;
    rec.fog = fog;
    rec.mean_ms = queues.wait(fog) + model.chain_mean(types, fog);
    return rec;
}

AllocationDecision start_decision(const AllocationUnit& unit, FogId local) {
    if (unit.workflow == nullptr || unit.partition == nullptr || unit.partition->vertices.empty()) {
        throw Error(ErrorCode::InvalidArgument, "allocation unit has no partition");
    }
    AllocationDecision d;
    d.partition = unit.index;
    d.local = local;
    d.chosen = local;
    d.deadline_ms = unit.deadline_ms;
    return d;
}

} // namespace

AllocationDecision allocate_mr_unit(const AllocationUnit& unit, FogId local,
                                    const FederationModel& model, const QueueEstimate& queues,
                                    double ci_level) {
    AllocationDecision d = start_decision(unit, local);
    const auto types = unit.types();
    d.local_record = evaluate_mr(unit, types, local, model, queues, ci_level);
    if (unit.partition->must_run_local) {
        d.reason = DecisionReason::ForcedLocalPinned;
        return d;
    }
    const auto neighbors = model.topology().neighbors(local);
    if (neighbors.empty()) {
        d.reason = DecisionReason::LocalDefault;
        return d;
    }
    const double p_r = d.local_record.probability;
    std::vector<const CandidateRecord*> better;
    for (FogId g : neighbors) {
        d.candidates.push_back(evaluate_mr(unit, types, g, model, queues, ci_level));
    }
    for (const auto& c : d.candidates) {
        if (c.probability > p_r) {
            better.push_back(&c);
        }
    }
    std::stable_sort(better.begin(), better.end(), [](const auto* a, const auto* b) {
        return a->probability != b->probability ? a->probability > b->probability : a->fog < b->fog;
    });
    if (better.empty()) {
        d.reason = DecisionReason::LocalHigherP;
        return d;
    }
    for (const auto* c : better) {
        d.examined.push_back(c->fog);
        if (ci_disjoint(c->ci, d.local_record.ci)) {
            d.chosen = c->fog;
            d.reason = DecisionReason::RemoteCiDisjoint;
            return d;
        }
        d.overlap_blocked.push_back(c->fog);
    }
    d.reason = DecisionReason::LocalCiOverlap;
    return d;
}

std::vector<AllocationDecision> allocate_mr(const PartitionPlan& plan, const WorkflowSpec& w,
                                            const Request& request, FogId local,
                                            const FederationModel& model,
                                            const QueueEstimate& queues, double ci_level) {
    return allocate(AllocMethod::MaxProbability, plan, w, request, local, model, queues, ci_level);
}

namespace {

template <typename Better>
AllocationDecision choose_baseline(const AllocationUnit& unit, FogId local,
                                   const FederationModel& model, const QueueEstimate& queues,
                                   bool certainty, Better better) {
    AllocationDecision d = start_decision(unit, local);
    const auto types = unit.types();
    d.local_record = evaluate_baseline(types, local, model, queues);
    d.local_record.score = certainty ? unit.deadline_ms - d.local_record.mean_ms : d.local_record.mean_ms;
    if (unit.partition->must_run_local) {
        d.reason = DecisionReason::ForcedLocalPinned;
        return d;
    }
    for (FogId g : model.topology().neighbors(local)) {
        auto rec = evaluate_baseline(types, g, model, queues);
        rec.score = certainty ? unit.deadline_ms - rec.mean_ms : rec.mean_ms;
        d.candidates.push_back(rec);
    }
    // Local wins ties; among neighbors the lower fog id wins.
    const CandidateRecord* best = &d.local_record;
    std::vector<const CandidateRecord*> order;
    for (const auto& c : d.candidates) {
        order.push_back(&c);
    }
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->fog < b->fog; });
    for (const auto* c : order) {
        if (better(c->score, best->score)) {
            best = c;
        }
    }
    d.chosen = best->fog;
    d.reason = best == &d.local_record ? DecisionReason::BaselineLocal : DecisionReason::BaselineRemote;
    return d;
}

} // namespace

AllocationDecision allocate_mect(const AllocationUnit& unit, FogId local,
                                 const FederationModel& model, const QueueEstimate& queues) {
    return choose_baseline(unit, local, model, queues, false,
                           [](double candidate, double best) { return candidate < best; });
}

AllocationDecision allocate_mcc(const AllocationUnit& unit, FogId local,
                                const FederationModel& model, const QueueEstimate& queues) {
    AllocationDecision d = choose_baseline(unit, local, model, queues, true,
                                           [](double candidate, double best) { return candidate > best; });
    // Only fogs with positive certainty qualify.
    if (d.reason == DecisionReason::BaselineRemote) {
        const auto it = std::find_if(d.candidates.begin(), d.candidates.end(),
                                     [&](const auto& c) { return c.fog == d.chosen; });
        if (it->score <= 0.0) {
            d.chosen = local;
            d.reason = DecisionReason::BaselineLocal;
        }
    }
    return d;
}

AllocationDecision allocate_no_federation(const AllocationUnit& unit, FogId local) {
    AllocationDecision d = start_decision(unit, local);
    d.local_record.fog = local;
    d.reason = DecisionReason::LocalDefault;
    return d;
}

std::vector<AllocationDecision> allocate(AllocMethod method, const PartitionPlan& plan,
                                         const WorkflowSpec& w, const Request& request,
                                         FogId local, const FederationModel& model,
                                         const QueueEstimate& queues, double ci_level) {
    std::vector<AllocationDecision> out;
    FogId source = local;
    for (std::size_t k = 0; k < plan.partitions.size(); ++k) {
        AllocationUnit unit;
        unit.workflow = &w;
        unit.partition = &plan.partitions[k];
        unit.index = k;
        unit.deadline_ms = sub_deadline(request, plan.partitions[k].vertices);
        unit.source_fog = source;
        AllocationDecision d;
        switch (method) {
        case AllocMethod::MaxProbability:
            d = allocate_mr_unit(unit, local, model, queues, ci_level);
            break;
        case AllocMethod::Mect: d = allocate_mect(unit, local, model, queues); break;
        case AllocMethod::Mcc: d = allocate_mcc(unit, local, model, queues); break;
        case AllocMethod::NoFederation: d = allocate_no_federation(unit, local); break;
        }
        source = d.chosen;
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace fogfed
