#pragma once

#include <array>
#include <string>
#include <vector>

#include "relab/core/matrix.hpp"
#include "relab/graph/graph.hpp"
#include "relab/objective/ndcg.hpp"
#include "relab/ranking.hpp"

namespace relab {

// Structure-only node input encoding: one-hot over {message, author user,
// retweeter user, comment} plus min-max normalized degree. Label-free by
// construction; degree bounds are fitted at training time and frozen, values
// clamp into [0,1] when the attacked graph exceeds them.
struct NodeEncoder {
    double min_degree = 0.0;
    double max_degree = 1.0;
    static constexpr int dim = 5;

    static NodeEncoder fit(const HeteroGraph& g);
    Matrix encode(const HeteroGraph& g) const;  // n_nodes x dim
};

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 200;
    int hidden_dim = 64;
    int layers = 3;
    std::uint64_t seed = 1;
};

// Relational GCN: per layer, one weight matrix per relation plus a self
// weight; mean aggregation over each relation's neighbors, ReLU between
// layers, sigmoid head on messages.
class RgcnModel {
public:
    RgcnModel() = default;
    RgcnModel(int input_dim, int hidden_dim, int layers, std::uint64_t seed);

    int layers() const { return static_cast<int>(weights_.size()); }
    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }

    // weights[layer][relation], index kRelationCount = self weight; in x out
    std::array<Matrix, kRelationCount + 1>& layer(int k) { return weights_[k]; }
    const std::array<Matrix, kRelationCount + 1>& layer(int k) const { return weights_[k]; }
    std::vector<double>& head_weights() { return head_w_; }
    const std::vector<double>& head_weights() const { return head_w_; }
    double& head_bias() { return head_b_; }
    double head_bias() const { return head_b_; }

private:
    int input_dim_ = 0, hidden_dim_ = 0;
    std::vector<std::array<Matrix, kRelationCount + 1>> weights_;
    std::vector<double> head_w_;
    double head_b_ = 0.0;
};

// Suspiciousness probability per node id (meaningful for messages).
std::vector<double> rgcn_forward(const RgcnModel& model, const HeteroGraph& g,
                                 const Matrix& encoding);

// Full-batch gradient descent on binary cross-entropy, gradients by manual
// backprop. Returns the per-epoch loss history. Throws if labels are empty,
// not on messages, or the loss turns non-finite.
std::vector<double> rgcn_train(RgcnModel& model, const HeteroGraph& g, const Matrix& encoding,
                               std::span<const MessageLabel> labels, const TrainConfig& cfg);

// Loss and analytic gradients for one configuration; the finite-difference
// tests drive this directly.
struct RgcnGradients {
    std::vector<std::array<Matrix, kRelationCount + 1>> weights;
    std::vector<double> head_w;
    double head_b = 0.0;
    double loss = 0.0;
};
RgcnGradients rgcn_loss_and_gradients(const RgcnModel& model, const HeteroGraph& g,
                                      const Matrix& encoding,
                                      std::span<const MessageLabel> labels);
double rgcn_loss(const RgcnModel& model, const HeteroGraph& g, const Matrix& encoding,
                 std::span<const MessageLabel> labels);

RankingSnapshot rgcn_snapshot(const RgcnModel& model, const HeteroGraph& g,
                              const NodeEncoder& enc, int step_tag = 0);

struct EvalMetrics {
    double accuracy = 0.0;
    double recall = 0.0;
    double ndcg = 0.0;
};
// Accuracy/recall at probability threshold 0.5 over the given labels;
// global NDCG of `ndcg_targets` against the snapshot ranking.
EvalMetrics rgcn_evaluate(const RgcnModel& model, const HeteroGraph& g, const NodeEncoder& enc,
                          std::span<const MessageLabel> labels, const TargetSet& ndcg_targets);

// Trained detector behind the black-box interface.
class RgcnDetector final : public DetectorOracle {
public:
    RgcnDetector(RgcnModel model, NodeEncoder enc)
        : model_(std::move(model)), encoder_(enc) {}
    RankingSnapshot query(const HeteroGraph& g, int step_tag = 0) const override {
        return rgcn_snapshot(model_, g, encoder_, step_tag);
    }
    const RgcnModel& model() const { return model_; }
    const NodeEncoder& encoder() const { return encoder_; }

private:
    RgcnModel model_;
    NodeEncoder encoder_;
};

// Checkpoint: versioned JSON of shapes plus row-major weights; bit-exact
// round-trip.
void save_detector(const RgcnDetector& det, const std::string& path);
RgcnDetector load_detector(const std::string& path);

}  // namespace relab
