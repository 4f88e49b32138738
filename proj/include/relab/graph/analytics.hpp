#pragma once

#include <span>
#include <vector>

#include "relab/graph/graph.hpp"

namespace relab {

struct PageRankConfig {
    double damping = 0.85;
    double tolerance = 1e-8;  // L1 change between sweeps
    int max_iterations = 200;
};

// PageRank over the user projection (user nodes, L3 edges only). Returns a
// score per node id (non-users 0). Scores sum to 1 over users; dangling mass
// is redistributed uniformly. An empty user set yields all zeros.
std::vector<double> pagerank(const HeteroGraph& g, const PageRankConfig& cfg = {});

// User and message influence. z1/z2 are the dataset maxima of re-post and
// comment counts, clamped to >=1; they are fitted once on the clean graph and
// frozen so influence stays comparable under attack edits.
struct InfluenceTable {
    std::vector<double> user_score;     // PageRank mass, by node id
    std::vector<double> message_score;  // by node id, 0 for non-messages
    long z1 = 1;
    long z2 = 1;
};

void fit_influence_scale(const HeteroGraph& g, long& z1, long& z2);

// score(m) = max PageRank over user neighbors + (|N1|-1)/z1 + |N2|/z2.
// Messages with no user neighbor score 0.
InfluenceTable message_influence(const HeteroGraph& g, std::span<const double> user_pr,
                                 long z1, long z2);

struct GraphStats {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double avg_degree = 0.0;
    double max_degree = 0.0;
    double min_degree = 0.0;
    double clustering = 0.0;  // 3*triangles / connected triples
};

GraphStats graph_stats(const HeteroGraph& g);
// Stats of one component given its member list (degrees equal global degrees
// because components are disconnected). Throws on empty scope.
GraphStats graph_stats(const HeteroGraph& g, std::span<const NodeId> component);

struct Neighborhood {
    std::vector<NodeId> ego;        // v + 1-hop, sorted
    std::size_t ego_edges = 0;      // induced edge count
    std::vector<NodeId> khop;       // BFS distance <= k, sorted
    std::vector<int> khop_dist;     // aligned with khop
};

Neighborhood ego_and_khop(const HeteroGraph& g, NodeId v, int k);

}  // namespace relab
