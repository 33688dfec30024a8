#include "fogfed/trace.hpp"

#include <ostream>

namespace fogfed {

using nlohmann::json;

namespace {

json candidate(const CandidateRecord& c) {
    return json{{"fog", c.fog},         {"hops", c.hops},   {"p", c.probability},
                {"ci", {c.ci.lo, c.ci.hi}}, {"mean_ms", c.mean_ms}, {"score", c.score}};
}

} // namespace

json trace_record(const RunRow& run, const RequestTrace& t) {
    json splits = json::array();
    for (const auto& s : t.plan.trace) {
        splits.push_back({{"parent", s.parent},
                          {"parent_p", s.parent_p},
                          {"left", s.left},
                          {"left_p", s.left_p},
                          {"right", s.right},
                          {"right_p", s.right_p},
                          {"accepted", s.accepted}});
    }
    json partitions = json::array();
    for (const auto& p : t.plan.partitions) {
        partitions.push_back({{"vertices", p.vertices},
                              {"pinned", p.must_run_local},
                              {"p", p.est_success}});
    }
    json decisions = json::array();
    for (const auto& d : t.decisions) {
        json cands = json::array();
        for (const auto& c : d.candidates) {
            cands.push_back(candidate(c));
        }
        decisions.push_back({{"partition", d.partition},
                             {"local", d.local},
                             {"chosen", d.chosen},
                             {"reason", std::string(to_string(d.reason))},
                             {"deadline_ms", d.deadline_ms},
                             {"local_record", candidate(d.local_record)},
                             {"candidates", cands},
                             {"examined", d.examined},
                             {"overlap_blocked", d.overlap_blocked}});
    }
    return json{{"scenario", run.scenario},
                {"method", run.method},
                {"requests", run.requests},
                {"degree", run.degree},
                {"seed", run.seed},
                {"request", t.request},
                {"workflow", t.workflow},
                {"monolithic", t.monolithic},
                {"arrival_ms", t.arrival_ms},
                {"deadline_ms", t.deadline_ms},
                {"partitioning", std::string(to_string(t.plan.method))},
                {"root_p", t.plan.root_probability},
                {"root_gate_passed", t.plan.root_gate_passed},
                {"splits", splits},
                {"partitions", partitions},
                {"decisions", decisions}};
}

void write_trace(std::ostream& out, const RunRow& run, const RunResult& result) {
    for (const auto& t : result.trace) {
        out << trace_record(run, t).dump() << '\n';
    }
}

} // namespace fogfed
