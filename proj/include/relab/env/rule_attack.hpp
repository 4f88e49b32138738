#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "relab/bandit/reward.hpp"
#include "relab/core/rng.hpp"
#include "relab/env/attack_env.hpp"

namespace relab {

// Rule-based comparison attackers. Each strategy picks a target rumor by its
// criterion and attaches per variant: GU-R links a good (no authored rumor)
// controllable user to the rumor, BU-N links the rumor's author to a
// controllable non-rumor message. All actions stay inside E'.
enum class RuleKind { Random, RandomPlus, Degree, Influence, Dcg };
enum class RuleVariant { GuR, BuN };

const char* to_string(RuleKind k);
const char* to_string(RuleVariant v);

// nullopt = no admissible action for this strategy (skip-step signal).
std::optional<NodeAction> select_rule_action(const AttackEnv& env, RuleKind kind,
                                             RuleVariant variant, Rng& rng);

// Trace hooks for loggers; episode index, then step data / episode summary.
using RuleStepObserver = std::function<void(int, int, const NodeAction&, double)>;
using RuleEpisodeObserver = std::function<void(int, double, double)>;

// One T-step episode from reset; returns the episode's total NDCG reduction.
double run_rule_episode(AttackEnv& env, RuleKind kind, RuleVariant variant, Rng& rng,
                        int episode_index = 0, const RuleStepObserver& on_step = {});

struct RuleRunResult {
    double mean_delta = 0.0;
    std::vector<double> per_episode;
};

RuleRunResult run_rule_attack(AttackEnv& env, RuleKind kind, RuleVariant variant,
                              int repetitions, Rng& rng,
                              const RuleStepObserver& on_step = {},
                              const RuleEpisodeObserver& on_episode = {});

// o-bound calibration: runs the DCG attacker (variants alternating) and
// collects the observed step deltas and episode totals, widened 10%.
struct CalibratedShapers {
    RewardShaper step;
    RewardShaper total;
};
CalibratedShapers calibrate_shapers(AttackEnv& env, int episodes, Rng& rng);

}  // namespace relab
