#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relab/bandit/reward.hpp"
#include "relab/detector/rgcn.hpp"
#include "relab/harness/synthetic.hpp"

namespace relab {

struct ExperimentConfig {
    std::string dataset_path;                 // empty -> synthetic
    std::optional<SyntheticSpec> synthetic;   // defaults to weibo-mini when both unset
    std::string out_dir = "out";

    std::vector<std::string> methods = {"linucb", "random", "random-plus",
                                        "degree", "influence", "dcg"};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

    int horizon = 20;
    double alpha = 1.0;
    int episodes = 1000;
    int rule_repetitions = 30;
    int report_last = 100;          // learned-attacker rows average the last K episodes
    int calibration_episodes = 30;  // rule-based o-bound calibration

    BaselineMode baseline = BaselineMode::TimeDependent;
    CreditMode credit = CreditMode::StepWise;
    // V(t) estimator rate: exponentially-weighted mean tracking the current
    // policy (0 = exact all-history mean)
    double baseline_ewma = 0.05;

    double controllable_frac = 0.2;
    double split_ratio = 0.7;
    int cutoff = 0;  // NDCG cutoff m; 0 -> ceil(0.1 * |messages|)
    int action_cap = 5000;
    int khop = 3;

    TrainConfig detector;
    std::string detector_checkpoint;  // load instead of training when set

    bool induced_l3 = false;
    bool indicator_as_printed = false;
    bool rhm_all_messages = false;
    bool bad_author_targets_only = false;

    std::uint64_t root_seed = 42;
};

struct MethodSeedResult {
    std::string method;
    std::uint64_t seed = 0;
    double delta_ndcg = 0.0;
    int episodes = 0;
    std::string notes;
    std::vector<double> curve;  // per-episode delta totals
};

struct VarianceRow {
    std::string method;
    std::uint64_t seed = 0;
    int full_episodes = 0;
    int horizon = 0;
    double sigma2 = 0.0, sigma2_prime = 0.0;
    bool ok = false;
    double beta_ml_g = 0.0, beta_ml_n = 0.0;  // 1/beta at each level
};

struct RankMovementRow {
    std::string method;
    std::uint64_t seed = 0;
    double mean_tdrop = 0.0, mean_rrise = 0.0;
    double best100_tdrop = 0.0, best100_rrise = 0.0;
};

struct ExperimentResult {
    std::string dataset_name;
    DatasetStats stats;
    EvalMetrics detector_train, detector_test;
    std::vector<MethodSeedResult> rows;
    std::vector<VarianceRow> variance;
    std::vector<RankMovementRow> movement;
    double elapsed_seconds = 0.0;
};

// Full pipeline: dataset, split, detector, calibration, all methods x seeds;
// writes results.csv, curves.csv, variance.csv, tdrop_rrise.csv, trace logs,
// feature schema, policy and detector checkpoints, meta.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Mean of one method's per-seed delta rows.
double mean_over_seeds(const std::vector<MethodSeedResult>& rows, const std::string& method);

}  // namespace relab
