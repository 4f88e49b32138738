#pragma once

#include <vector>

#include "relab/bandit/linucb.hpp"
#include "relab/bandit/reward.hpp"
#include "relab/core/rng.hpp"
#include "relab/env/attack_env.hpp"

namespace relab {

struct EpisodeStep {
    int t = 0;
    SubgraphAction subgraph;
    NodeAction node;
    std::vector<double> xg, xn;  // chosen state-action vectors per level
    double delta = 0.0;          // step-wise NDCG change
    double r = 0.0;              // shaped reward
    double r_tilde_g = 0.0;      // baseline-adjusted, subgraph level
    double r_tilde_n = 0.0;      // baseline-adjusted, node level
    long tdrop = 0, rrise = 0;   // over the selected component pair
};

struct EpisodeResult {
    std::vector<EpisodeStep> steps;
    double j0 = 0.0, jT = 0.0;
    double delta_total = 0.0;  // sum of step deltas
    bool truncated = false;    // graph saturated before the horizon
    bool a1_capped = false, a2_capped = false;
};

struct EpisodeDeps {
    const FeatureBounds& bounds;
    const RewardShaper& step_shaper;
    const RewardShaper& total_shaper;  // delayed-credit normalization
    BaselineState& baseline;
    CreditMode credit = CreditMode::StepWise;
    int action_cap = 5000;
    bool update_policies = true;
};

// One full hierarchical attack episode: per step extract subgraph features
// for A1, select, extract node features for A2, select, apply the edge, shape
// and baseline-adjust the reward; both policies batch-update at episode end.
EpisodeResult run_episode(AttackEnv& env, LinUcbPolicy& policy_g, LinUcbPolicy& policy_n,
                          EpisodeDeps& deps, Rng& rng);

}  // namespace relab
