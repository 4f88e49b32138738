#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relab/graph/graph.hpp"

namespace relab {

// Per-message suspiciousness probabilities and the ranking they induce at one
// point in time. Rank 1 is the most suspicious; ties break by ascending node
// id. This is the only detector output the attacker ever sees.
struct RankingSnapshot {
    std::vector<NodeId> by_rank;       // by_rank[r-1] = message at rank r
    std::vector<double> prob_by_rank;  // aligned with by_rank
    std::vector<int> rank_of;          // by node id; 0 = not ranked
    std::vector<double> prob_of;       // by node id; valid where ranked
    int step_tag = 0;

    std::size_t n_ranked() const { return by_rank.size(); }
    bool ranked(NodeId v) const {
        return v >= 0 && static_cast<std::size_t>(v) < rank_of.size() && rank_of[v] > 0;
    }
};

RankingSnapshot build_snapshot(std::size_t n_nodes, std::span<const NodeId> message_ids,
                               std::span<const double> probabilities, int step_tag = 0);

// Black-box view of the trained detector: callers observe probabilities and
// ranks only, never parameters. Everything outside the detector module talks
// to this interface.
class DetectorOracle {
public:
    virtual ~DetectorOracle() = default;
    virtual RankingSnapshot query(const HeteroGraph& g, int step_tag = 0) const = 0;
};

}  // namespace relab
