#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relab/core/rng.hpp"
#include "relab/features/features.hpp"
#include "relab/graph/analytics.hpp"

using namespace relab;

namespace {

NodeSpec user(NodeId id, bool author = false) { return {id, NodeKind::User, author, -1}; }
NodeSpec msg(NodeId id, int label) { return {id, NodeKind::Message, false, label}; }
NodeSpec comment(NodeId id) { return {id, NodeKind::Comment, false, -1}; }

// One seven-node community exercising every feature group:
//   0 user/author (bad: authored rumors 2 and 6)
//   1 user/retweeter       2 message/rumor (target)
//   3 message/non-rumor    4 comment
//   5 user/author (good)   6 message/rumor (RHM)
struct Fixture {
    HeteroGraph g;
    RankingSnapshot snap;
    InfluenceTable inf;
    AttackCounters counters;
    std::vector<std::uint8_t> is_target, is_rhm, bad_author;
    std::vector<double> pr;

    Fixture()
        : g(HeteroGraph::build(
              std::vector<NodeSpec>{user(0, true), user(1), msg(2, 1), msg(3, 0), comment(4),
                                    user(5, true), msg(6, 1)},
              std::vector<EdgeSpec>{{0, 2, Relation::L1},
                                    {1, 2, Relation::L1},
                                    {0, 1, Relation::L3},
                                    {0, 3, Relation::L1},
                                    {5, 3, Relation::L1},
                                    {3, 4, Relation::L2},
                                    {0, 6, Relation::L1}})) {
        snap = build_snapshot(7, std::vector<NodeId>{2, 3, 6}, std::vector<double>{0.9, 0.2, 0.6});
        pr = pagerank(g);
        inf = message_influence(g, pr, 5, 4);
        counters.reset(7);
        counters.record(5, 2);  // one prior attack edge inside this component
        is_target.assign(7, 0);
        is_rhm.assign(7, 0);
        bad_author.assign(7, 0);
        is_target[2] = 1;
        is_rhm[6] = 1;
        bad_author[0] = 1;
    }

    WorldView view(int horizon = 10) const {
        return WorldView{g, snap, inf, counters, is_target, is_rhm, bad_author, horizon, 3};
    }
};

int slot(std::span<const SlotDef> schema, const char* name) {
    for (int i = 0; i < static_cast<int>(schema.size()); ++i)
        if (std::string(schema[i].name) == name) return i;
    FAIL("missing slot ", name);
    return -1;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("schema is stable and machine-readable") {
    CHECK(subgraph_dim() == 33);
    CHECK(node_dim() == 27);
    CHECK(schema_hash() == schema_hash());
    const std::string doc = schema_index_map_json();
    CHECK(doc.find("n_nodes") != std::string::npos);
    CHECK(doc.find("\"index\": 0") != std::string::npos);
    CHECK(std::string(subgraph_schema()[0].name) == "n_nodes");
    CHECK(std::string(node_schema()[0].name) == "degree");
}

TEST_CASE("subgraph features match a per-field manual oracle") {
    const Fixture f;
    const auto members = f.g.components().at(0).second;
    REQUIRE(members.size() == 7);
    const NodeId root = f.g.component_root(0);
    const auto raw = subgraph_features_raw(f.view(), root, members);
    const auto s = subgraph_schema();

    CHECK(raw[slot(s, "n_nodes")] == 7.0);
    CHECK(raw[slot(s, "n_edges")] == 7.0);
    // one triangle (0,1,2); triples: C(4,2)+C(2,2)+C(2,2)+C(3,2) = 11
    CHECK(raw[slot(s, "clustering_coefficient")] == doctest::Approx(3.0 / 11.0));
    CHECK(raw[slot(s, "avg_degree")] == doctest::Approx(2.0));
    CHECK(raw[slot(s, "max_degree")] == 4.0);
    CHECK(raw[slot(s, "min_degree")] == 1.0);
    CHECK(raw[slot(s, "message_ratio")] == doctest::Approx(3.0 / 7.0));
    CHECK(raw[slot(s, "author_ratio")] == doctest::Approx(2.0 / 7.0));
    CHECK(raw[slot(s, "re_tweeter_ratio")] == doctest::Approx(1.0 / 7.0));
    CHECK(raw[slot(s, "review_ratio")] == doctest::Approx(1.0 / 7.0));
    CHECK(raw[slot(s, "bad_author_ratio")] == doctest::Approx(0.5));
    CHECK(raw[slot(s, "rumor_ratio")] == doctest::Approx(2.0 / 3.0));
    CHECK(raw[slot(s, "rumor_retweet_ratio")] == doctest::Approx(1.0));
    CHECK(raw[slot(s, "rumor_review_ratio")] == doctest::Approx(0.0));

    const double pr0 = f.pr[0], pr1 = f.pr[1], pr5 = f.pr[5];
    CHECK(raw[slot(s, "avg_author_inf")] == doctest::Approx((pr0 + pr5) / 2.0));
    CHECK(raw[slot(s, "max_author_inf")] == doctest::Approx(std::max(pr0, pr5)));
    CHECK(raw[slot(s, "min_author_inf")] == doctest::Approx(std::min(pr0, pr5)));
    CHECK(raw[slot(s, "avg_user_inf")] == doctest::Approx((pr0 + pr1 + pr5) / 3.0));
    CHECK(raw[slot(s, "max_user_inf")] == doctest::Approx(std::max({pr0, pr1, pr5})));
    CHECK(raw[slot(s, "min_user_inf")] == doctest::Approx(std::min({pr0, pr1, pr5})));

    // message influences: msg2 = max(pr0,pr1)+1/5, msg3 = max(pr0,pr5)+1/5+1/4, msg6 = pr0
    const double w2 = std::max(pr0, pr1) + 1.0 / 5.0;
    const double w3 = std::max(pr0, pr5) + 1.0 / 5.0 + 1.0 / 4.0;
    const double w6 = pr0;
    CHECK(raw[slot(s, "avg_rumor_inf")] == doctest::Approx((w2 + w6) / 2.0));
    CHECK(raw[slot(s, "max_rumor_inf")] == doctest::Approx(std::max(w2, w6)));
    CHECK(raw[slot(s, "min_rumor_inf")] == doctest::Approx(std::min(w2, w6)));
    CHECK(raw[slot(s, "avg_nonrumor_inf")] == doctest::Approx(w3));
    CHECK(raw[slot(s, "max_nonrumor_inf")] == doctest::Approx(w3));
    CHECK(raw[slot(s, "min_nonrumor_inf")] == doctest::Approx(w3));

    CHECK(raw[slot(s, "avg_target_suspicious")] == doctest::Approx(0.9));
    CHECK(raw[slot(s, "max_target_suspicious")] == doctest::Approx(0.9));
    CHECK(raw[slot(s, "min_target_suspicious")] == doctest::Approx(0.9));
    CHECK(raw[slot(s, "attack_degree")] == doctest::Approx(0.1));  // 1 added edge, T=10
    CHECK(raw[slot(s, "avg_rhm_suspicious")] == doctest::Approx(0.6));
    CHECK(raw[slot(s, "max_rhm_suspicious")] == doctest::Approx(0.6));
    CHECK(raw[slot(s, "min_rhm_suspicious")] == doctest::Approx(0.6));
}

TEST_CASE("degenerate components impute rumor statistics to zero") {
    const auto g = HeteroGraph::build(std::vector<NodeSpec>{msg(0, 0)}, std::vector<EdgeSpec>{});
    const auto snap = build_snapshot(1, std::vector<NodeId>{0}, std::vector<double>{0.4});
    const auto inf = message_influence(g, pagerank(g), 1, 1);
    AttackCounters counters;
    counters.reset(1);
    std::vector<std::uint8_t> zeros(1, 0);
    const WorldView view{g, snap, inf, counters, zeros, zeros, zeros, 10, 3};
    const auto members = g.components().at(0).second;
    const auto raw = subgraph_features_raw(view, 0, members);
    const auto s = subgraph_schema();
    CHECK(raw[slot(s, "rumor_ratio")] == 0.0);
    CHECK(raw[slot(s, "avg_rumor_inf")] == 0.0);
    CHECK(raw[slot(s, "max_rumor_inf")] == 0.0);
    CHECK(raw[slot(s, "attack_degree")] == 0.0);
    CHECK(raw[slot(s, "bad_author_ratio")] == 0.0);
}

TEST_CASE("node features match a per-field manual oracle") {
    const Fixture f;
    const auto n = node_schema();

    SUBCASE("retweeter node 1") {
        const auto raw = node_features_raw(f.view(), 1);
        CHECK(raw[slot(n, "degree")] == 2.0);
        CHECK(raw[slot(n, "ego_n_edges")] == 3.0);  // triangle 0-1-2
        CHECK(raw[slot(n, "good_bad")] == 0.0);
        CHECK(raw[slot(n, "node_type_rumor")] == 0.0);
        CHECK(raw[slot(n, "node_type_nonrumor")] == 0.0);
        CHECK(raw[slot(n, "node_type_good_author")] == 0.0);
        CHECK(raw[slot(n, "node_type_bad_author")] == 0.0);
        CHECK(raw[slot(n, "ego_rumor_ratio")] == doctest::Approx(1.0 / 3.0));
        CHECK(raw[slot(n, "ego_bu_ratio")] == doctest::Approx(1.0 / 3.0));
        CHECK(raw[slot(n, "ego_review_ratio")] == 0.0);
        CHECK(raw[slot(n, "node_inf")] == doctest::Approx(f.pr[1]));
        CHECK(raw[slot(n, "ego_user_inf")] == doctest::Approx((f.pr[0] + f.pr[1]) / 2.0));
        const double w2 = std::max(f.pr[0], f.pr[1]) + 0.2;
        CHECK(raw[slot(n, "ego_message_inf")] == doctest::Approx(w2));
        CHECK(raw[slot(n, "avg_node_potential")] == doctest::Approx(0.9));
        CHECK(raw[slot(n, "avg_neighbor_suspicious")] == doctest::Approx(0.9));
        CHECK(raw[slot(n, "min_neighbor_suspicious")] == doctest::Approx(0.9));
        // ego attack degrees: node 2 has one incident added edge, T=10
        CHECK(raw[slot(n, "avg_node_attack_degree")] == doctest::Approx(0.1 / 3.0));
        CHECK(raw[slot(n, "max_node_attack_degree")] == doctest::Approx(0.1));
        CHECK(raw[slot(n, "min_node_attack_degree")] == 0.0);
        CHECK(raw[slot(n, "n_targets")] == 1.0);
        CHECK(raw[slot(n, "n_targets_distance")] == doctest::Approx(1.0));
        CHECK(raw[slot(n, "avg_rhm_suspicious")] == doctest::Approx(0.6));  // msg 6 at 2 hops
    }

    SUBCASE("rumor node 2 and good author node 5") {
        const auto raw2 = node_features_raw(f.view(), 2);
        CHECK(raw2[slot(n, "good_bad")] == 1.0);
        CHECK(raw2[slot(n, "node_type_rumor")] == 1.0);
        CHECK(raw2[slot(n, "node_type_bad_author")] == 0.0);
        // the target itself is in range at distance zero
        CHECK(raw2[slot(n, "n_targets")] == 1.0);
        CHECK(raw2[slot(n, "n_targets_distance")] == 0.0);

        const auto raw5 = node_features_raw(f.view(), 5);
        CHECK(raw5[slot(n, "node_type_good_author")] == 1.0);
        CHECK(raw5[slot(n, "good_bad")] == 0.0);
        CHECK(raw5[slot(n, "degree")] == 1.0);
        CHECK(raw5[slot(n, "ego_n_edges")] == 1.0);
        CHECK(raw5[slot(n, "n_targets")] == 1.0);  // target 2 at distance 3
        CHECK(raw5[slot(n, "n_targets_distance")] == doctest::Approx(3.0));
        CHECK(raw5[slot(n, "avg_node_potential")] == 0.0);  // none within one hop
    }

    SUBCASE("no targets in range leaves the distance slot as the sentinel") {
        const auto g = HeteroGraph::build(std::vector<NodeSpec>{user(0), msg(1, 0)},
                                          std::vector<EdgeSpec>{});
        const auto snap = build_snapshot(2, std::vector<NodeId>{1}, std::vector<double>{0.3});
        const auto inf = message_influence(g, pagerank(g), 1, 1);
        AttackCounters counters;
        counters.reset(2);
        std::vector<std::uint8_t> zeros(2, 0);
        const WorldView view{g, snap, inf, counters, zeros, zeros, zeros, 10, 3};
        const auto raw = node_features_raw(view, 0);
        CHECK(raw[slot(n, "n_targets")] == 0.0);
        CHECK(std::isnan(raw[slot(n, "n_targets_distance")]));
        // normalization turns the sentinel into exactly 1.0
        const FeatureBounds b = FeatureBounds::fit(view);
        CHECK(b.normalize_node(raw)[slot(n, "n_targets_distance")] == 1.0);
    }
}

TEST_CASE("pair vectors concatenate in order") {
    const std::vector<double> a{0.1, 0.2, 0.3}, b{0.9, 0.8, 0.7};
    const auto x = pair_vector(a, b);
    REQUIRE(x.size() == 6);
    for (int i = 0; i < 3; ++i) {
        CHECK(x[i] == a[i]);
        CHECK(x[3 + i] == b[i]);
    }
    CHECK(pair_vector(a, b) != pair_vector(b, a));
    CHECK_THROWS_AS(pair_vector(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("bounds: clamping, constants, round trip, unit ranges") {
    const Fixture f;
    const FeatureBounds b = FeatureBounds::fit(f.view());
    const auto s = subgraph_schema();

    SUBCASE("single-component clean graph pins data-fit slots to constants") {
        CHECK(b.subgraph_slot_constant(slot(s, "n_nodes")));
        std::vector<double> raw(subgraph_dim(), 0.0);
        raw[slot(s, "n_nodes")] = 123.0;
        CHECK(b.normalize_subgraph(raw)[slot(s, "n_nodes")] == 0.0);
    }
    SUBCASE("unit slots keep fixed (0,1) bounds and clamp") {
        CHECK_FALSE(b.subgraph_slot_constant(slot(s, "attack_degree")));
        CHECK(b.subgraph_bounds(slot(s, "attack_degree")) ==
              std::pair<double, double>{0.0, 1.0});
        std::vector<double> raw(subgraph_dim(), 0.0);
        raw[slot(s, "attack_degree")] = 1.7;
        CHECK(b.normalize_subgraph(raw)[slot(s, "attack_degree")] == 1.0);
    }
    SUBCASE("values outside the clean range clamp to the edges") {
        const auto n = node_schema();
        const auto [lo, hi] = b.node_bounds(slot(n, "degree"));
        REQUIRE(hi > lo);
        std::vector<double> raw(node_dim(), 0.0);
        raw[slot(n, "degree")] = hi + 5.0;
        CHECK(b.normalize_node(raw)[slot(n, "degree")] == 1.0);
        raw[slot(n, "degree")] = lo - 5.0;
        CHECK(b.normalize_node(raw)[slot(n, "degree")] == 0.0);
    }
    SUBCASE("denormalize(normalize(x)) equals clamp(x) on non-constant fit slots") {
        const auto n = node_schema();
        const int deg = slot(n, "degree");
        REQUIRE_FALSE(b.node_slot_constant(deg));
        const auto [lo, hi] = b.node_bounds(deg);
        for (double x : {lo - 1.0, lo, (lo + hi) / 2.0, hi, hi + 2.0}) {
            std::vector<double> raw(node_dim(), 0.0);
            raw[deg] = x;
            const double y = b.normalize_node(raw)[deg];
            CHECK(b.denormalize_node(deg, y) ==
                  doctest::Approx(std::clamp(x, lo, hi)).epsilon(1e-12));
        }
    }
    SUBCASE("every normalized entry lies in [0,1]") {
        const auto members = f.g.components().at(0).second;
        for (double x : subgraph_features(f.view(), f.g.component_root(0), members, b)) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        for (NodeId v = 0; v < 7; ++v)
            for (double x : node_features(f.view(), v, b)) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
            }
    }
}

TEST_CASE("extraction is pure and RHM slots read only flagged nodes") {
    Fixture f;
    const auto members = f.g.components().at(0).second;
    const std::uint64_t before = f.g.hash();
    const auto r1 = subgraph_features_raw(f.view(), f.g.component_root(0), members);
    const auto r2 = subgraph_features_raw(f.view(), f.g.component_root(0), members);
    CHECK(r1 == r2);
    CHECK(f.g.hash() == before);

    // changing a non-RHM probability (the non-rumor message 3) must leave
    // every rhm_* slot untouched
    const auto s = subgraph_schema();
    Fixture g2;
    g2.snap = build_snapshot(7, std::vector<NodeId>{2, 3, 6}, std::vector<double>{0.9, 0.7, 0.6});
    const auto r3 = subgraph_features_raw(g2.view(), g2.g.component_root(0), members);
    for (const char* name : {"avg_rhm_suspicious", "max_rhm_suspicious", "min_rhm_suspicious"})
        CHECK(r3[slot(s, name)] == r1[slot(s, name)]);
}

TEST_SUITE_END();
