#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "fogfed/error.hpp"
#include "fogfed/partition.hpp"

namespace fogfed {

namespace {

// Dinic max-flow on a small dense-ish graph with double capacities.
class FlowNetwork {
public:
    explicit FlowNetwork(std::size_t n) : adj_(n), level_(n), cursor_(n) {}

    void add_edge(std::size_t u, std::size_t v, double cap) {
        adj_[u].push_back({v, adj_[v].size(), cap});
        adj_[v].push_back({u, adj_[u].size() - 1, 0.0});
    }

    double max_flow(std::size_t s, std::size_t t, double eps) {
        eps_ = eps;
        double flow = 0.0;
        while (bfs(s, t)) {
            std::fill(cursor_.begin(), cursor_.end(), 0);
            while (double pushed = dfs(s, t, std::numeric_limits<double>::infinity())) {
                flow += pushed;
            }
        }
        return flow;
    }

    /// Vertices reachable from s through edges with residual capacity.
    std::vector<bool> residual_reachable(std::size_t s) const {
        std::vector<bool> seen(adj_.size(), false);
        std::queue<std::size_t> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const auto& e : adj_[u]) {
                if (e.cap > eps_ && !seen[e.to]) {
                    seen[e.to] = true;
                    q.push(e.to);
                }
            }
        }
        return seen;
    }

private:
    struct Arc {
        std::size_t to;
        std::size_t rev;
        double cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const auto& e : adj_[u]) {
                if (e.cap > eps_ && level_[e.to] < 0) {
                    level_[e.to] = level_[u] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(std::size_t u, std::size_t t, double limit) {
        if (u == t) {
            return limit;
        }
        for (std::size_t& i = cursor_[u]; i < adj_[u].size(); ++i) {
            Arc& e = adj_[u][i];
            if (e.cap > eps_ && level_[e.to] == level_[u] + 1) {
                const double pushed = dfs(e.to, t, std::min(limit, e.cap));
                if (pushed > 0.0) {
                    e.cap -= pushed;
                    adj_[e.to][e.rev].cap += pushed;
                    return pushed;
                }
            }
        }
        return 0.0;
    }

    std::vector<std::vector<Arc>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    double eps_ = 0.0;
};

struct Induced {
    std::vector<std::size_t> vertices;           // sorted subset
    std::vector<int> local;                      // workflow index -> local index or -1
    std::vector<std::size_t> edges;              // edge indices inside the subset
};

Induced induce(const WorkflowSpec& w, std::span<const std::size_t> subset) {
    Induced g;
    g.vertices.assign(subset.begin(), subset.end());
    std::sort(g.vertices.begin(), g.vertices.end());
    g.local.assign(w.size(), -1);
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        if (g.vertices[i] >= w.size()) {
            throw Error(ErrorCode::InvalidArgument, "subset references an unknown vertex");
        }
        g.local[g.vertices[i]] = static_cast<int>(i);
    }
    for (std::size_t k = 0; k < w.edges.size(); ++k) {
        if (g.local[w.edges[k].from] >= 0 && g.local[w.edges[k].to] >= 0) {
            g.edges.push_back(k);
        }
    }
    return g;
}

CutResult make_cut(const WorkflowSpec& w, const Induced& g, const std::vector<bool>& in_s,
                   std::span<const double> weights) {
    CutResult r;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        (in_s[i] ? r.side_s : r.side_t).push_back(g.vertices[i]);
    }
    for (std::size_t k : g.edges) {
        const auto& e = w.edges[k];
        if (in_s[static_cast<std::size_t>(g.local[e.from])] &&
            !in_s[static_cast<std::size_t>(g.local[e.to])]) {
            r.cut_edges.push_back(k);
            r.cut_weight += weights[k];
        }
    }
    return r;
}

bool ancestor_closed(const WorkflowSpec& w, const Induced& g, const std::vector<bool>& in_s) {
    for (std::size_t k : g.edges) {
        const auto& e = w.edges[k];
        if (!in_s[static_cast<std::size_t>(g.local[e.from])] &&
            in_s[static_cast<std::size_t>(g.local[e.to])]) {
            return false;
        }
    }
    return true;
}

void check_weights(const WorkflowSpec& w, std::span<const double> weights) {
    if (weights.size() != w.edges.size()) {
        throw Error(ErrorCode::InvalidArgument, "one weight per edge required");
    }
    for (double x : weights) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, "edge weights must be positive");
        }
    }
}

// Weak components of the induced subgraph, as lists of local indices ordered
// by their smallest member.
std::vector<std::vector<std::size_t>> components(const WorkflowSpec& w, const Induced& g) {
    const std::size_t n = g.vertices.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t k : g.edges) {
        const auto a = find(static_cast<std::size_t>(g.local[w.edges[k].from]));
        const auto b = find(static_cast<std::size_t>(g.local[w.edges[k].to]));
        parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return out;
}

} // namespace

CutResult best_prefix_cut(const WorkflowSpec& w, std::span<const std::size_t> subset,
                          std::span<const double> edge_weights) {
    if (subset.size() < 2) {
        throw Error(ErrorCode::NotPartitionable, "a single vertex cannot be bisected");
    }
    const Induced g = induce(w, subset);
    std::vector<std::size_t> order;
    for (std::size_t v : topological_order(w)) {
        if (g.local[v] >= 0) {
            order.push_back(v);
        }
    }
    std::vector<bool> in_s(g.vertices.size(), false);
    CutResult best;
    bool have = false;
    for (std::size_t k = 1; k < order.size(); ++k) {
        in_s[static_cast<std::size_t>(g.local[order[k - 1]])] = true;
        CutResult c = make_cut(w, g, in_s, edge_weights);
        if (!have || c.cut_weight < best.cut_weight - 1e-12 * std::max(1.0, best.cut_weight)) {
            best = std::move(c);
            have = true;
        }
    }
    return best;
}

CutResult min_cut_subset(const WorkflowSpec& w, std::span<const std::size_t> subset,
                         std::span<const double> edge_weights) {
    check_weights(w, edge_weights);
    if (subset.size() < 2) {
        throw Error(ErrorCode::NotPartitionable, "a single vertex cannot be bisected");
    }
    const Induced g = induce(w, subset);
    const std::size_t n = g.vertices.size();

    // A disconnected subgraph splits for free: the smallest component (by
    // size, then by smallest vertex) becomes the source side.
    auto comps = components(w, g);
    if (comps.size() > 1) {
        const auto smallest = std::min_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
        });
        std::vector<bool> in_s(n, false);
        for (std::size_t i : *smallest) {
            in_s[i] = true;
        }
        return make_cut(w, g, in_s, edge_weights);
    }

    double total = 0.0;
    for (std::size_t k : g.edges) {
        total += edge_weights[k];
    }
    // Finite stand-in for infinity: larger than any cut.
    const double big = 2.0 * total + 1.0;
    const std::size_t source = n;
    const std::size_t sink = n + 1;
    FlowNetwork net(n + 2);
    std::vector<bool> has_pred(n, false);
    std::vector<bool> has_succ(n, false);
    for (std::size_t k : g.edges) {
        const auto u = static_cast<std::size_t>(g.local[w.edges[k].from]);
        const auto v = static_cast<std::size_t>(g.local[w.edges[k].to]);
        net.add_edge(u, v, edge_weights[k]);
        // Reverse arc of infinite capacity: any finite cut is ancestor-closed.
        net.add_edge(v, u, big);
        has_succ[u] = true;
        has_pred[v] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!has_pred[i]) {
            net.add_edge(source, i, big);
        }
        if (!has_succ[i]) {
            net.add_edge(i, sink, big);
        }
    }
    net.max_flow(source, sink, 1e-12 * big);
    // The residual-reachable set is the minimal source side over all minimum
    // cuts, which is the smallest-cardinality tie-break.
    const auto reach = net.residual_reachable(source);
    std::vector<bool> in_s(reach.begin(), reach.begin() + static_cast<std::ptrdiff_t>(n));
    if (!ancestor_closed(w, g, in_s)) {
        return best_prefix_cut(w, subset, edge_weights);
    }
    return make_cut(w, g, in_s, edge_weights);
}

CutResult min_cut(const WorkflowSpec& w, std::span<const double> edge_weights) {
    std::vector<std::size_t> all(w.size());
    std::iota(all.begin(), all.end(), 0);
    return min_cut_subset(w, all, edge_weights);
}

} // namespace fogfed
