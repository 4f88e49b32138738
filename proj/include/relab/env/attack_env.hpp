#pragma once

#include <span>
#include <vector>

#include "relab/features/features.hpp"
#include "relab/graph/analytics.hpp"
#include "relab/graph/graph.hpp"
#include "relab/objective/ndcg.hpp"
#include "relab/ranking.hpp"

namespace relab {

// Attacker's knowledge of one scenario: controllable accounts and messages,
// target rumors, and the label-derived sets frozen on the clean graph.
struct WorldInfo {
    std::vector<std::uint8_t> controllable;  // by node id
    std::vector<NodeId> ctrl_users;
    std::vector<NodeId> ctrl_messages;
    std::vector<std::uint8_t> is_target;
    std::vector<NodeId> targets;             // sorted
    std::vector<std::uint8_t> bad_author;    // frozen on clean graph
    std::vector<std::uint8_t> is_rhm;        // non-target rumors (or all non-targets)
    std::vector<NodeId> target_authors;      // controllable authors of target rumors
};

struct SubgraphAction {
    NodeId gi = -1;  // component root holding >=1 target
    NodeId gj = -1;  // component root holding >=1 controllable node
};

struct NodeAction {
    NodeId vp = -1;  // from G_i
    NodeId vq = -1;  // from G_j
};

struct EnvConfig {
    int horizon = 20;
    bool induced_l3 = false;
    int khop = 3;
};

// The episodic attack MDP. Episodes restore state by rebuilding the working
// graph from the clean graph; the detector is queried as a black box after
// every edge addition. One instance per worker; step() needs exclusive
// access, const queries may fan out across readers.
class AttackEnv {
public:
    AttackEnv(const HeteroGraph& clean, const DetectorOracle& oracle, WorldInfo world,
              TargetSet targets, EnvConfig cfg);

    void reset();

    // All ordered component pairs satisfying the A1 rule, G_i == G_j allowed;
    // recomputed against the current merged component index. Throws when no
    // component holds a target or none holds a controllable node.
    std::vector<SubgraphAction> subgraph_action_space() const;

    // All realizable node pairs for a chosen subgraph pair: one controllable
    // user and one controllable message, edge absent. Empty result means the
    // agent should mask this pair.
    std::vector<NodeAction> node_action_space(const SubgraphAction& chosen) const;

    // True when {a,b} is an admissible attack edge (in E', not yet present).
    bool admissible(NodeId a, NodeId b) const;

    // Applies the edge, re-queries the detector, returns J(t) - J(t+1).
    double step(const NodeAction& action);

    const HeteroGraph& graph() const { return g_; }
    const HeteroGraph& clean_graph() const { return clean_; }
    const RankingSnapshot& snapshot() const { return snap_; }
    double j() const { return j_; }
    double j0() const { return j0_; }
    int t() const { return t_; }
    int horizon() const { return cfg_.horizon; }
    const EnvConfig& config() const { return cfg_; }
    const TargetSet& target_set() const { return targets_; }
    const WorldInfo& world() const { return world_; }
    const InfluenceTable& influence() const { return influence_; }
    const AttackCounters& counters() const { return counters_; }
    const std::vector<std::pair<NodeId, std::vector<NodeId>>>& components() const {
        return components_;
    }
    std::span<const NodeId> component_members(NodeId root) const;

    WorldView world_view() const {
        return WorldView{g_,
                         snap_,
                         influence_,
                         counters_,
                         world_.is_target,
                         world_.is_rhm,
                         world_.bad_author,
                         cfg_.horizon,
                         cfg_.khop};
    }

private:
    void refresh_components();
    void refresh_influence();

    const HeteroGraph& clean_;
    const DetectorOracle& oracle_;
    WorldInfo world_;
    TargetSet targets_;
    EnvConfig cfg_;

    std::vector<double> clean_user_pr_;
    long z1_ = 1, z2_ = 1;

    HeteroGraph g_;
    int t_ = 0;
    RankingSnapshot snap_;
    double j_ = 0.0, j0_ = 0.0;
    InfluenceTable influence_;
    AttackCounters counters_;
    std::vector<std::pair<NodeId, std::vector<NodeId>>> components_;
    std::vector<int> comp_index_of_root_;
};

}  // namespace relab
