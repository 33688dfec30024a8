#include "fogfed/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

#include "fogfed/error.hpp"
#include "fogfed/estimator.hpp"
#include "fogfed/rng.hpp"

namespace fogfed {

namespace {

enum class EventKind { Arrival, InputArrived, ExecDone };

struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::size_t subject;   // request index for Arrival, instance index otherwise

    bool operator>(const Event& o) const {
        return time != o.time ? time > o.time : seq > o.seq;
    }
};

struct Instance {
    std::size_t request = 0;
    std::size_t vertex = 0;
    FogId fog = 0;
    std::size_t missing_inputs = 0;
    double mean_exec = 0.0;
    double ready_ms = 0.0;
    bool counted = false;   // included in its fog's backlog
    bool done = false;
};

struct Node {
    bool busy = false;
    std::size_t instance = 0;
    double start_ms = 0.0;
};

struct FogRuntime {
    std::vector<Node> nodes;
    std::deque<std::size_t> ready;
    double backlog_mean = 0.0;      // mean execution of assigned instances not yet started
};

struct RequestState {
    std::size_t first_instance = 0;   // instances of a request are contiguous, indexed by vertex
    std::size_t remaining_exits = 0;
    double completion = 0.0;
};

class Engine {
public:
    Engine(const FederationModel& model, const std::vector<Request>& requests,
           const EngineConfig& config, std::uint64_t seed)
        : model_(model), requests_(requests), config_(config), rng_(seed) {
        const auto& topo = model_.topology();
        if (topo.size() == 0) {
            throw Error(ErrorCode::Config, "federation has no fogs");
        }
        fogs_.resize(topo.size());
        for (const auto& f : topo.fogs()) {
            fogs_[f.id].nodes.resize(static_cast<std::size_t>(f.node_count));
        }
        for (const auto& r : requests_) {
            if (!r.workflow || r.workflow->size() == 0) {
                throw Error(ErrorCode::Config, "request without a workflow");
            }
            if (r.origin_fog >= topo.size()) {
                throw Error(ErrorCode::InvalidId, "request origin is not a fog of the federation");
            }
            if (r.service_slack_ms.size() != r.workflow->size()) {
                throw Error(ErrorCode::Config, "request deadlines are not assigned");
            }
            for (const auto& v : r.workflow->vertices) {
                for (FogId f = 0; f < topo.size(); ++f) {
                    model_.etc().at(v.id, f);
                }
            }
        }
    }

    RunResult run() {
        states_.resize(requests_.size());
        outcome_index_.resize(requests_.size());
        for (std::size_t i = 0; i < requests_.size(); ++i) {
            push(requests_[i].arrival_ms, EventKind::Arrival, i);
        }
        while (!events_.empty()) {
            const Event e = events_.top();
            events_.pop();
            if (e.time < now_) {
                throw Error(ErrorCode::InvalidArgument, "event time went backwards");
            }
            now_ = e.time;
            switch (e.kind) {
            case EventKind::Arrival: on_arrival(e.subject); break;
            case EventKind::InputArrived: on_input(e.subject); break;
            case EventKind::ExecDone: on_exec_done(e.subject); break;
            }
        }
        return finish();
    }

private:
    void push(double time, EventKind kind, std::size_t subject) {
        events_.push(Event{time, seq_++, kind, subject});
    }

    // Backlog: unstarted instances no longer blocked on another fog, plus the
    // expected remainder of running ones.
    QueueEstimate snapshot() const {
        QueueEstimate q;
        q.wait_ms.assign(fogs_.size(), 0.0);
        for (std::size_t f = 0; f < fogs_.size(); ++f) {
            double work = std::max(0.0, fogs_[f].backlog_mean);
            for (const auto& n : fogs_[f].nodes) {
                if (n.busy) {
                    work += std::max(0.0, instances_[n.instance].mean_exec - (now_ - n.start_ms));
                }
            }
            q.wait_ms[f] = work / static_cast<double>(fogs_[f].nodes.size());
        }
        return q;
    }

    void on_arrival(std::size_t ri) {
        const Request& r = requests_[ri];
        const WorkflowSpec& w = *r.workflow;
        const FogId local = r.origin_fog;
        const QueueEstimate queues = snapshot();

        const ModelEstimator estimator(model_, local, queues, config_.queue_aware_partitioning);
        PartitionPlan plan = make_plan(w, r, config_.partition, estimator);
        auto decisions = allocate(config_.allocation, plan, w, r, local, model_, queues,
                                  config_.ci_level);

        RequestState& st = states_[ri];
        st.first_instance = instances_.size();
        instances_.resize(instances_.size() + w.size());
        std::size_t remote = 0;
        for (std::size_t k = 0; k < plan.partitions.size(); ++k) {
            const FogId fog = decisions[k].chosen;
            if (plan.partitions[k].must_run_local && fog != local) {
                throw Error(ErrorCode::InvalidArgument, "pinned partition placed remotely");
            }
            remote += fog != local ? 1 : 0;
            for (std::size_t v : plan.partitions[k].vertices) {
                Instance& inst = instances_[st.first_instance + v];
                inst.request = ri;
                inst.vertex = v;
                inst.fog = fog;
                inst.mean_exec = model_.etc().mean(w.vertices[v].id, fog);
            }
        }
        for (std::size_t v = 0; v < w.size(); ++v) {
            Instance& inst = instances_[st.first_instance + v];
            const auto preds = w.predecessors(v);
            inst.missing_inputs = preds.empty() ? 1 : preds.size();
            st.remaining_exits += w.is_exit(v) ? 1 : 0;
        }
        for (std::size_t v = 0; v < w.size(); ++v) {
            if (w.is_entry(v)) {
                count_backlog(st.first_instance + v);
            }
        }
        outcomes_.push_back(RequestOutcome{r.id, r.monolithic, r.arrival_ms, 0.0,
                                           r.workflow_deadline_ms, false, plan.partitions.size(),
                                           remote});
        outcome_index_[ri] = outcomes_.size() - 1;

        if (config_.record_trace) {
            RequestTrace t;
            t.request = r.id;
            t.workflow = w.vertices.front().id;
            t.monolithic = r.monolithic;
            t.arrival_ms = r.arrival_ms;
            t.deadline_ms = r.relative_deadline_ms();
            t.plan = std::move(plan);
            t.decisions = std::move(decisions);
            trace_.push_back(std::move(t));
        }

        // Entry inputs travel from the gateway to wherever the entry runs.
        for (std::size_t v = 0; v < w.size(); ++v) {
            if (w.is_entry(v)) {
                deliver(st.first_instance + v, local);
            }
        }
    }

    // Adds `idx` to its fog's backlog once every predecessor is done or already
    // counted on the same fog, then propagates along same-fog successors.
    void count_backlog(std::size_t idx) {
        Instance& inst = instances_[idx];
        if (inst.counted || inst.done) {
            return;
        }
        const WorkflowSpec& w = *requests_[inst.request].workflow;
        const std::size_t base = states_[inst.request].first_instance;
        for (std::size_t p : w.predecessors(inst.vertex)) {
            const Instance& pred = instances_[base + p];
            if (!pred.done && !(pred.fog == inst.fog && pred.counted)) {
                return;
            }
        }
        inst.counted = true;
        fogs_[inst.fog].backlog_mean += inst.mean_exec;
        for (std::size_t s : w.successors(inst.vertex)) {
            if (instances_[base + s].fog == inst.fog) {
                count_backlog(base + s);
            }
        }
    }

    // Sends the input of instance `to` from fog `from`; same-fog delivery is immediate.
    void deliver(std::size_t to, FogId from) {
        const Instance& inst = instances_[to];
        const std::size_t hops = hop_distance(model_.topology(), from, inst.fog);
        if (hops == 0) {
            on_input(to);
            return;
        }
        const auto& type = requests_[inst.request].workflow->vertices[inst.vertex].id;
        const double delay = sample(model_.ett().at(type, inst.fog, hops), rng_);
        push(now_ + delay, EventKind::InputArrived, to);
    }

    void on_input(std::size_t idx) {
        Instance& inst = instances_[idx];
        if (inst.missing_inputs == 0) {
            throw Error(ErrorCode::InvalidArgument, "input delivered twice");
        }
        if (--inst.missing_inputs > 0) {
            return;
        }
        inst.ready_ms = now_;
        fogs_[inst.fog].ready.push_back(idx);
        dispatch(inst.fog);
    }

    void dispatch(FogId fog) {
        FogRuntime& rt = fogs_[fog];
        for (std::size_t n = 0; n < rt.nodes.size() && !rt.ready.empty(); ++n) {
            if (rt.nodes[n].busy) {
                continue;
            }
            const std::size_t idx = rt.ready.front();
            rt.ready.pop_front();
            start(fog, n, idx);
        }
    }

    void start(FogId fog, std::size_t n, std::size_t idx) {
        FogRuntime& rt = fogs_[fog];
        Instance& inst = instances_[idx];
        const WorkflowSpec& w = *requests_[inst.request].workflow;
        const std::size_t base = states_[inst.request].first_instance;
        if (rt.nodes[n].busy) {
            throw Error(ErrorCode::InvalidArgument, "node exclusivity violated");
        }
        if (inst.missing_inputs != 0) {
            throw Error(ErrorCode::InvalidArgument, "instance started before its inputs arrived");
        }
        for (std::size_t p : w.predecessors(inst.vertex)) {
            if (!instances_[base + p].done) {
                throw Error(ErrorCode::InvalidArgument, "instance started before a predecessor");
            }
        }
        if (inst.counted) {
            rt.backlog_mean -= inst.mean_exec;
            inst.counted = false;
        }
        rt.nodes[n] = Node{true, idx, now_};
        const double exec =
            sample(model_.etc().at(w.vertices[inst.vertex].id, fog), rng_) * config_.exec_scale;
        if (config_.record_schedule) {
            schedule_.push_back(ExecRecord{requests_[inst.request].id, inst.vertex, fog, n,
                                           inst.ready_ms, now_, now_ + exec});
        }
        push(now_ + exec, EventKind::ExecDone, idx);
    }

    void on_exec_done(std::size_t idx) {
        Instance& inst = instances_[idx];
        FogRuntime& rt = fogs_[inst.fog];
        auto node = std::find_if(rt.nodes.begin(), rt.nodes.end(),
                                 [&](const Node& n) { return n.busy && n.instance == idx; });
        if (node == rt.nodes.end()) {
            throw Error(ErrorCode::InvalidArgument, "completion for an instance that is not running");
        }
        node->busy = false;
        inst.done = true;

        const WorkflowSpec& w = *requests_[inst.request].workflow;
        RequestState& st = states_[inst.request];
        for (std::size_t s : w.successors(inst.vertex)) {
            count_backlog(st.first_instance + s);
            deliver(st.first_instance + s, inst.fog);
        }
        if (w.is_exit(inst.vertex)) {
            st.completion = std::max(st.completion, now_);
            if (--st.remaining_exits == 0) {
                auto& out = outcomes_[outcome_index_[inst.request]];
                out.completion_ms = st.completion;
                out.met = st.completion <= out.deadline_ms;
            }
        }
        dispatch(inst.fog);
    }

    RunResult finish() {
        RunResult res;
        res.total = requests_.size();
        double makespan = 0.0;
        for (const auto& st : states_) {
            if (st.remaining_exits != 0) {
                throw Error(ErrorCode::InvalidArgument, "request left unfinished at quiescence");
            }
        }
        std::sort(outcomes_.begin(), outcomes_.end(),
                  [](const auto& a, const auto& b) { return a.id < b.id; });
        for (const auto& o : outcomes_) {
            res.met += o.met ? 1 : 0;
            makespan += o.completion_ms - o.arrival_ms;
        }
        res.missed = res.total - res.met;
        if (res.total > 0) {
            res.meet_rate = static_cast<double>(res.met) / static_cast<double>(res.total);
            res.avg_makespan_ms = makespan / static_cast<double>(res.total);
        }
        res.outcomes = std::move(outcomes_);
        res.trace = std::move(trace_);
        res.schedule = std::move(schedule_);
        return res;
    }

    const FederationModel& model_;
    const std::vector<Request>& requests_;
    const EngineConfig& config_;
    Rng rng_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    std::vector<FogRuntime> fogs_;
    std::vector<Instance> instances_;
    std::vector<RequestState> states_;
    std::vector<RequestOutcome> outcomes_;
    std::vector<std::size_t> outcome_index_;
    std::vector<RequestTrace> trace_;
    std::vector<ExecRecord> schedule_;
};

} // namespace

RunResult run_engine(const FederationModel& model, const std::vector<Request>& requests,
                     const EngineConfig& config, std::uint64_t seed) {
    return Engine(model, requests, config, seed).run();
}

} // namespace fogfed
