#include "relab/graph/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace relab {

std::vector<double> pagerank(const HeteroGraph& g, const PageRankConfig& cfg) {
    const auto users = g.nodes_of_kind(NodeKind::User);
    std::vector<double> score(g.n_nodes(), 0.0);
    if (users.empty()) return score;

    const std::size_t n = users.size();
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
    std::vector<std::size_t> idx(g.n_nodes(), 0);
    for (std::size_t i = 0; i < n; ++i) idx[users[i]] = i;

    const double d = cfg.damping;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (g.neighbors(users[i], Relation::L3).empty()) dangling += x[i];
        const double base = (1.0 - d) / static_cast<double>(n) +
                            d * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (std::size_t i = 0; i < n; ++i) {
            const auto nbrs = g.neighbors(users[i], Relation::L3);
            if (nbrs.empty()) continue;
            const double share = d * x[i] / static_cast<double>(nbrs.size());
            for (NodeId u : nbrs) next[idx[u]] += share;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - x[i]);
        x.swap(next);
        if (delta < cfg.tolerance) break;
    }
    double sum = 0.0;
    for (double v : x) sum += v;
    for (std::size_t i = 0; i < n; ++i) score[users[i]] = x[i] / sum;
    return score;
}

void fit_influence_scale(const HeteroGraph& g, long& z1, long& z2) {
    long reposts = 0, comments = 0;
    for (NodeId m : g.nodes_of_kind(NodeKind::Message)) {
        const long n1 = static_cast<long>(g.neighbors(m, Relation::L1).size());
        const long n2 = static_cast<long>(g.neighbors(m, Relation::L2).size());
        reposts = std::max(reposts, n1 - 1);
        comments = std::max(comments, n2);
    }
    z1 = std::max(1L, reposts);
    z2 = std::max(1L, comments);
}

InfluenceTable message_influence(const HeteroGraph& g, std::span<const double> user_pr,
                                 long z1, long z2) {
    if (user_pr.size() != g.n_nodes())
        throw std::invalid_argument("message_influence: PageRank vector size mismatch");
    if (z1 < 1 || z2 < 1) throw std::invalid_argument("message_influence: z1/z2 must be >= 1");
    InfluenceTable t;
    t.user_score.assign(user_pr.begin(), user_pr.end());
    t.message_score.assign(g.n_nodes(), 0.0);
    t.z1 = z1;
    t.z2 = z2;
    for (NodeId m : g.nodes_of_kind(NodeKind::Message)) {
        const auto users = g.neighbors(m, Relation::L1);
        if (users.empty()) continue;  // no author: conservatively zero
        double best = 0.0;
        for (NodeId u : users) best = std::max(best, user_pr[u]);
        t.message_score[m] = best +
                             static_cast<double>(users.size() - 1) / static_cast<double>(z1) +
                             static_cast<double>(g.neighbors(m, Relation::L2).size()) /
                                 static_cast<double>(z2);
    }
    return t;
}

namespace {

GraphStats stats_over(const HeteroGraph& g, std::span<const NodeId> nodes,
                      bool whole_graph) {
    GraphStats s;
    s.n_nodes = nodes.size();
    double degsum = 0.0, degmax = 0.0, degmin = 1e300;
    std::size_t edge_endpoints = 0;
    long long triples = 0, closed = 0;

    std::vector<std::uint8_t> in_scope;
    if (!whole_graph) {
        in_scope.assign(g.n_nodes(), 0);
        for (NodeId v : nodes) in_scope[v] = 1;
    }
    const auto member = [&](NodeId v) { return whole_graph || in_scope[v]; };

    for (NodeId v : nodes) {
        std::size_t deg = 0;
        const auto nbrs = g.neighbors(v);
        for (NodeId u : nbrs)
            if (member(u)) ++deg;
        degsum += static_cast<double>(deg);
        degmax = std::max(degmax, static_cast<double>(deg));
        degmin = std::min(degmin, static_cast<double>(deg));
        edge_endpoints += deg;
        triples += static_cast<long long>(deg) * static_cast<long long>(deg - 1) / 2;
        // closed triples centred at v: adjacent neighbor pairs
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (!member(nbrs[i])) continue;
            for (std::size_t j = i + 1; j < nbrs.size(); ++j)
                if (member(nbrs[j]) && g.has_edge(nbrs[i], nbrs[j])) ++closed;
        }
    }
    s.n_edges = edge_endpoints / 2;
    s.avg_degree = s.n_nodes ? degsum / static_cast<double>(s.n_nodes) : 0.0;
    s.max_degree = s.n_nodes ? degmax : 0.0;
    s.min_degree = s.n_nodes ? degmin : 0.0;
    // closed counts each triangle 3x, once per centre
    s.clustering = triples > 0 ? static_cast<double>(closed) / static_cast<double>(triples) : 0.0;
    return s;
}

}  // namespace

GraphStats graph_stats(const HeteroGraph& g) {
    std::vector<NodeId> all(g.n_nodes());
    for (std::size_t v = 0; v < g.n_nodes(); ++v) all[v] = static_cast<NodeId>(v);
    if (all.empty()) throw std::invalid_argument("graph_stats: empty scope");
    return stats_over(g, all, true);
}

GraphStats graph_stats(const HeteroGraph& g, std::span<const NodeId> component) {
    if (component.empty()) throw std::invalid_argument("graph_stats: empty scope");
    return stats_over(g, component, false);
}

Neighborhood ego_and_khop(const HeteroGraph& g, NodeId v, int k) {
    if (!g.has_node(v)) throw std::invalid_argument("ego_and_khop: unknown node id");
    if (k < 1) throw std::invalid_argument("ego_and_khop: k must be >= 1");
    Neighborhood out;

    std::vector<int> dist(g.n_nodes(), -1);
    std::queue<NodeId> q;
    dist[v] = 0;
    q.push(v);
    while (!q.empty()) {
        const NodeId cur = q.front();
        q.pop();
        if (dist[cur] == k) continue;
        for (NodeId nb : g.neighbors(cur))
            if (dist[nb] == -1) {
                dist[nb] = dist[cur] + 1;
                q.push(nb);
            }
    }
    for (std::size_t u = 0; u < g.n_nodes(); ++u) {
        if (dist[u] < 0) continue;
        out.khop.push_back(static_cast<NodeId>(u));
        out.khop_dist.push_back(dist[u]);
        if (dist[u] <= 1) out.ego.push_back(static_cast<NodeId>(u));
    }
    for (std::size_t i = 0; i < out.ego.size(); ++i)
        for (std::size_t j = i + 1; j < out.ego.size(); ++j)
            if (g.has_edge(out.ego[i], out.ego[j])) ++out.ego_edges;
    return out;
}

}  // namespace relab
