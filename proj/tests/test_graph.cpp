#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "relab/core/rng.hpp"
#include "relab/graph/analytics.hpp"
#include "relab/graph/graph.hpp"

using namespace relab;

namespace {

HeteroGraph make(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges) {
    return HeteroGraph::build(nodes, edges);
}

NodeSpec user(NodeId id, bool author = false) { return {id, NodeKind::User, author, -1}; }
NodeSpec msg(NodeId id, int label = -1) { return {id, NodeKind::Message, false, label}; }
NodeSpec comment(NodeId id) { return {id, NodeKind::Comment, false, -1}; }

// independent BFS labeling
std::vector<int> bfs_labels(const HeteroGraph& g) {
    std::vector<int> label(g.n_nodes(), -1);
    int next = 0;
    for (std::size_t s = 0; s < g.n_nodes(); ++s) {
        if (label[s] != -1) continue;
        const int c = next++;
        std::queue<NodeId> q;
        q.push(static_cast<NodeId>(s));
        label[s] = c;
        while (!q.empty()) {
            const NodeId v = q.front();
            q.pop();
            for (NodeId u : g.neighbors(v))
                if (label[u] == -1) {
                    label[u] = c;
                    q.push(u);
                }
        }
    }
    return label;
}

// random user-only graph for PageRank oracles
HeteroGraph random_user_graph(int n, double p, Rng& rng) {
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(user(i));
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance(p)) edges.push_back({i, j, Relation::L3});
    return make(nodes, edges);
}

// dense power-iteration PageRank over the user projection
std::vector<double> dense_pagerank_oracle(const HeteroGraph& g, double d = 0.85) {
    const auto users = g.nodes_of_kind(NodeKind::User);
    const std::size_t n = users.size();
    std::vector<std::size_t> idx(g.n_nodes());
    for (std::size_t i = 0; i < n; ++i) idx[users[i]] = i;
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(users[i], Relation::L3);
        if (nbrs.empty()) {
            for (std::size_t j = 0; j < n; ++j) P[i][j] = 1.0 / static_cast<double>(n);
        } else {
            for (NodeId u : nbrs) P[i][idx[u]] = 1.0 / static_cast<double>(nbrs.size());
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), nx(n);
    for (int it = 0; it < 5000; ++it) {
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += x[i] * P[i][j];
            nx[j] = (1.0 - d) / static_cast<double>(n) + d * s;
        }
        for (std::size_t j = 0; j < n; ++j) delta += std::abs(nx[j] - x[j]);
        x = nx;
        if (delta < 1e-13) break;
    }
    std::vector<double> out(g.n_nodes(), 0.0);
    for (std::size_t i = 0; i < n; ++i) out[users[i]] = x[i];
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("two users and one edge form one component of size 2") {
    const auto g = make({user(0), user(1)}, {{0, 1, Relation::L3}});
    CHECK(g.component_count() == 1);
    CHECK(g.same_component(0, 1));
    CHECK(g.components().at(0).second.size() == 2);
}

TEST_CASE("three isolated messages are three components") {
    const auto g = make({msg(0), msg(1), msg(2)}, {});
    CHECK(g.component_count() == 3);
}

TEST_CASE("construction rejects bad input with a diagnostic naming the edge") {
    CHECK_THROWS_WITH_AS(make({user(0), msg(1)}, {{0, 1, Relation::L3}}),
                         doctest::Contains("edge #0"), std::invalid_argument);
    CHECK_THROWS_AS(make({user(0), msg(1)}, {{0, 1, Relation::L1}, {1, 0, Relation::L1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make({user(0), msg(1)}, {{0, 7, Relation::L1}}), std::invalid_argument);
    CHECK_THROWS_AS(make({user(0), user(0)}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make({user(0), user(3)}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make({user(0), user(1)}, {{0, 0, Relation::L3}}), std::invalid_argument);
}

TEST_CASE("attack edges merge components and never split them") {
    auto g = make({user(0, true), msg(1), user(2, true), msg(3)},
                  {{0, 1, Relation::L1}, {2, 3, Relation::L1}});
    CHECK(g.component_count() == 2);
    g.add_attack_edge(0, 3);
    CHECK(g.component_count() == 1);
    CHECK(g.same_component(1, 3));
    // same-component addition keeps the count
    g.add_attack_edge(2, 1);
    CHECK(g.component_count() == 1);
    CHECK_THROWS_AS(g.add_attack_edge(0, 3), std::invalid_argument);   // duplicate
    CHECK_THROWS_AS(g.add_attack_edge(1, 3), std::invalid_argument);   // wrong kinds
    g.validate();
}

TEST_CASE("T=20 distinct attack edges raise the edge count by exactly 20") {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    for (int u = 0; u < 5; ++u) nodes.push_back(user(u, true));
    for (int m = 5; m < 30; ++m) nodes.push_back(msg(m));
    auto g = make(nodes, edges);
    const std::size_t before = g.n_edges();
    Rng rng(11);
    int added = 0;
    while (added < 20) {
        const NodeId u = static_cast<NodeId>(rng.uniform_int(5));
        const NodeId m = static_cast<NodeId>(5 + rng.uniform_int(25));
        if (g.has_edge(u, m)) continue;
        g.add_attack_edge(u, m);
        ++added;
    }
    CHECK(g.n_edges() == before + 20);
    g.validate();
}

TEST_CASE("component index equals BFS labeling after random growth") {
    Rng rng(3);
    std::vector<NodeSpec> nodes;
    for (int u = 0; u < 12; ++u) nodes.push_back(user(u, u % 3 == 0));
    for (int m = 12; m < 40; ++m) nodes.push_back(msg(m));
    auto g = make(nodes, {});
    for (int step = 0; step < 60; ++step) {
        const NodeId u = static_cast<NodeId>(rng.uniform_int(12));
        const NodeId m = static_cast<NodeId>(12 + rng.uniform_int(28));
        if (g.has_edge(u, m)) continue;
        const std::size_t comps_before = g.component_count();
        g.add_attack_edge(u, m);
        CHECK(g.component_count() <= comps_before);  // merges only
        const auto labels = bfs_labels(g);
        for (std::size_t a = 0; a < g.n_nodes(); ++a)
            for (std::size_t b = a + 1; b < g.n_nodes(); ++b) {
                const bool same_bfs = labels[a] == labels[b];
                const bool same_idx =
                    g.same_component(static_cast<NodeId>(a), static_cast<NodeId>(b));
                REQUIRE(same_bfs == same_idx);
            }
    }
}

TEST_CASE("induced-l3 attack edges connect the user to prior re-posters") {
    auto g = make({user(0, true), user(1), user(2, true), msg(3)},
                  {{0, 3, Relation::L1}, {1, 3, Relation::L1}});
    g.add_attack_edge(2, 3, /*induced_l3=*/true);
    CHECK(g.has_edge(2, 3));
    CHECK(g.has_edge(2, 0));
    CHECK(g.has_edge(2, 1));
    CHECK(g.n_edges(Relation::L3) == 2);
    g.validate();
}

TEST_CASE("ego and k-hop neighborhoods") {
    SUBCASE("isolated node") {
        const auto g = make({msg(0)}, {});
        const auto nb = ego_and_khop(g, 0, 3);
        CHECK(nb.ego == std::vector<NodeId>{0});
        CHECK(nb.khop == std::vector<NodeId>{0});
        CHECK(nb.ego_edges == 0);
    }
    SUBCASE("path a-b-c with k=2") {
        const auto g = make({user(0), user(1), user(2)},
                            {{0, 1, Relation::L3}, {1, 2, Relation::L3}});
        const auto nb = ego_and_khop(g, 0, 2);
        CHECK(nb.khop == std::vector<NodeId>{0, 1, 2});
        CHECK(nb.khop_dist == std::vector<int>{0, 1, 2});
        CHECK(nb.ego == std::vector<NodeId>{0, 1});
        CHECK_THROWS_AS(ego_and_khop(g, 9, 2), std::invalid_argument);
    }
    SUBCASE("random graph matches exhaustive BFS oracle") {
        Rng rng(17);
        auto g = random_user_graph(50, 0.06, rng);
        for (NodeId v : {0, 7, 23, 49}) {
            const auto nb = ego_and_khop(g, v, 3);
            // oracle: plain BFS
            std::vector<int> dist(g.n_nodes(), -1);
            std::queue<NodeId> q;
            dist[v] = 0;
            q.push(v);
            while (!q.empty()) {
                const NodeId cur = q.front();
                q.pop();
                for (NodeId u : g.neighbors(cur))
                    if (dist[u] == -1) {
                        dist[u] = dist[cur] + 1;
                        q.push(u);
                    }
            }
            std::vector<NodeId> want;
            for (std::size_t u = 0; u < g.n_nodes(); ++u)
                if (dist[u] >= 0 && dist[u] <= 3) want.push_back(static_cast<NodeId>(u));
            REQUIRE(nb.khop == want);
            for (std::size_t i = 0; i < nb.khop.size(); ++i)
                CHECK(nb.khop_dist[i] == dist[nb.khop[i]]);
        }
    }
}

TEST_CASE("pagerank") {
    SUBCASE("two users one edge split the mass evenly") {
        const auto g = make({user(0), user(1)}, {{0, 1, Relation::L3}});
        const auto pr = pagerank(g);
        CHECK(pr[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(pr[1] == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("no L3 edges yields the uniform distribution") {
        const auto g = make({user(0), user(1), user(2), user(3)}, {});
        const auto pr = pagerank(g);
        for (int i = 0; i < 4; ++i) CHECK(pr[i] == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("empty user set returns zeros") {
        const auto g = make({msg(0)}, {});
        const auto pr = pagerank(g);
        CHECK(pr[0] == 0.0);
    }
    SUBCASE("5-node star matches the dense oracle; center dominates") {
        std::vector<EdgeSpec> edges;
        for (int leaf = 1; leaf < 5; ++leaf) edges.push_back({0, leaf, Relation::L3});
        const auto g = make({user(0), user(1), user(2), user(3), user(4)}, edges);
        const auto pr = pagerank(g);
        const auto want = dense_pagerank_oracle(g);
        for (int i = 0; i < 5; ++i) CHECK(pr[i] == doctest::Approx(want[i]).epsilon(1e-8));
        for (int leaf = 1; leaf < 5; ++leaf) CHECK(pr[0] > pr[leaf]);
    }
    SUBCASE("scores are nonnegative and sum to one on random graphs") {
        Rng rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const auto g = random_user_graph(30, 0.05 + 0.02 * trial, rng);
            const auto pr = pagerank(g);
            double sum = 0.0;
            for (double x : pr) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("message influence") {
    // author(0) - msg(3); users 1,2 re-post msg(4); comments 5,6 on msg(4)
    const auto g = make(
        {user(0, true), user(1), user(2), msg(3, 1), msg(4, 0), comment(5), comment(6)},
        {{0, 3, Relation::L1},
         {0, 4, Relation::L1},
         {1, 4, Relation::L1},
         {2, 4, Relation::L1},
         {4, 5, Relation::L2},
         {4, 6, Relation::L2}});
    const auto pr = pagerank(g);

    SUBCASE("single-author message scores exactly the author's PageRank") {
        const auto t = message_influence(g, pr, 10, 5);
        CHECK(t.message_score[3] == doctest::Approx(pr[0]).epsilon(1e-12));
    }
    SUBCASE("direct evaluation with z1=10, z2=5") {
        const auto t = message_influence(g, pr, 10, 5);
        const double max_pr = std::max({pr[0], pr[1], pr[2]});
        CHECK(t.message_score[4] == doctest::Approx(max_pr + 2.0 / 10.0 + 2.0 / 5.0).epsilon(1e-12));
    }
    SUBCASE("all-message sweep equals per-message recompute oracle") {
        long z1 = 1, z2 = 1;
        fit_influence_scale(g, z1, z2);
        CHECK(z1 == 2);  // msg 4 has 3 user neighbors -> 2 re-posts
        CHECK(z2 == 2);
        const auto t = message_influence(g, pr, z1, z2);
        for (NodeId m : g.nodes_of_kind(NodeKind::Message)) {
            double best = 0.0;
            for (NodeId u : g.neighbors(m, Relation::L1)) best = std::max(best, pr[u]);
            const double want =
                g.neighbors(m, Relation::L1).empty()
                    ? 0.0
                    : best +
                          static_cast<double>(g.neighbors(m, Relation::L1).size() - 1) /
                              static_cast<double>(z1) +
                          static_cast<double>(g.neighbors(m, Relation::L2).size()) /
                              static_cast<double>(z2);
            CHECK(t.message_score[m] == doctest::Approx(want).epsilon(1e-12));
        }
    }
    SUBCASE("message with no user neighbors scores zero") {
        const auto g2 = make({msg(0)}, {});
        const auto t = message_influence(g2, pagerank(g2), 1, 1);
        CHECK(t.message_score[0] == 0.0);
    }
    SUBCASE("monotone in comment count") {
        auto g2 = make({user(0, true), msg(1), comment(2)}, {{0, 1, Relation::L1}});
        const auto pr2 = pagerank(g2);
        const double before = message_influence(g2, pr2, 5, 5).message_score[1];
        auto g3 = make({user(0, true), msg(1), comment(2)},
                       {{0, 1, Relation::L1}, {1, 2, Relation::L2}});
        const double after = message_influence(g3, pr2, 5, 5).message_score[1];
        CHECK(after >= before);
    }
}

TEST_CASE("graph stats and clustering") {
    SUBCASE("triangle has clustering 1.0") {
        const auto g = make({user(0), user(1), user(2)},
                            {{0, 1, Relation::L3}, {1, 2, Relation::L3}, {0, 2, Relation::L3}});
        const auto s = graph_stats(g);
        CHECK(s.clustering == doctest::Approx(1.0));
        CHECK(s.n_edges == 3);
        CHECK(s.avg_degree == doctest::Approx(2.0));
    }
    SUBCASE("star has clustering 0.0") {
        std::vector<EdgeSpec> edges;
        for (int leaf = 1; leaf < 6; ++leaf) edges.push_back({0, leaf, Relation::L3});
        const auto g = make({user(0), user(1), user(2), user(3), user(4), user(5)}, edges);
        CHECK(graph_stats(g).clustering == doctest::Approx(0.0));
    }
    SUBCASE("random graph matches the triple-enumeration oracle") {
        Rng rng(23);
        const auto g = random_user_graph(24, 0.18, rng);
        long long triples = 0, closed = 0;
        const auto n = static_cast<NodeId>(g.n_nodes());
        for (NodeId v = 0; v < n; ++v)
            for (NodeId a = 0; a < n; ++a) {
                if (a == v || !g.has_edge(v, a)) continue;
                for (NodeId b = a + 1; b < n; ++b) {
                    if (b == v || !g.has_edge(v, b)) continue;
                    ++triples;
                    if (g.has_edge(a, b)) ++closed;
                }
            }
        const double want = triples ? static_cast<double>(closed) / static_cast<double>(triples)
                                    : 0.0;
        CHECK(graph_stats(g).clustering == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("per-component scope") {
        const auto g = make({user(0), user(1), user(2), msg(3)},
                            {{0, 1, Relation::L3}, {0, 2, Relation::L3}, {1, 2, Relation::L3}});
        const auto comps = g.components();
        REQUIRE(comps.size() == 2);
        for (const auto& [root, members] : comps) {
            const auto s = graph_stats(g, members);
            if (members.size() == 3) CHECK(s.clustering == doctest::Approx(1.0));
            else CHECK(s.n_edges == 0);
        }
        CHECK_THROWS_AS(graph_stats(g, std::span<const NodeId>{}), std::invalid_argument);
    }
}

TEST_CASE("relation-kind consistency holds for every stored edge") {
    Rng rng(31);
    std::vector<NodeSpec> nodes;
    for (int u = 0; u < 8; ++u) nodes.push_back(user(u, u < 4));
    for (int m = 8; m < 16; ++m) nodes.push_back(msg(m, m % 2));
    for (int c = 16; c < 20; ++c) nodes.push_back(comment(c));
    std::vector<EdgeSpec> edges;
    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b, Relation r) {
        if (seen.count({std::min(a, b), std::max(a, b)})) return;
        seen.insert({std::min(a, b), std::max(a, b)});
        edges.push_back({a, b, r});
    };
    for (int i = 0; i < 20; ++i) {
        add(static_cast<int>(rng.uniform_int(8)), 8 + static_cast<int>(rng.uniform_int(8)),
            Relation::L1);
        add(8 + static_cast<int>(rng.uniform_int(8)), 16 + static_cast<int>(rng.uniform_int(4)),
            Relation::L2);
    }
    auto g = make(nodes, edges);
    g.validate();
    CHECK(g.hash() == make(nodes, edges).hash());
}

TEST_SUITE_END();
