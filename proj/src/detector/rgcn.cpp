#include "relab/detector/rgcn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relab/core/rng.hpp"
#include "relab/objective/ndcg.hpp"

namespace relab {

NodeEncoder NodeEncoder::fit(const HeteroGraph& g) {
    NodeEncoder e;
    double lo = 1e300, hi = 0.0;
    for (std::size_t v = 0; v < g.n_nodes(); ++v) {
        const auto d = static_cast<double>(g.degree(static_cast<NodeId>(v)));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (g.n_nodes() == 0) lo = 0.0;
    e.min_degree = lo;
    e.max_degree = hi > lo ? hi : lo + 1.0;
    return e;
}

Matrix NodeEncoder::encode(const HeteroGraph& g) const {
    Matrix x(g.n_nodes(), dim);
    const double span = max_degree - min_degree;
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        const auto v = static_cast<NodeId>(i);
        int slot = 0;
        switch (g.kind(v)) {
            case NodeKind::Message: slot = 0; break;
            case NodeKind::User: slot = g.is_author(v) ? 1 : 2; break;
            case NodeKind::Comment: slot = 3; break;
        }
        x(i, slot) = 1.0;
        double nd = (static_cast<double>(g.degree(v)) - min_degree) / span;
        x(i, 4) = std::clamp(nd, 0.0, 1.0);
    }
    return x;
}

RgcnModel::RgcnModel(int input_dim, int hidden_dim, int layers, std::uint64_t seed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
    if (input_dim < 1 || hidden_dim < 1 || layers < 1)
        throw std::invalid_argument("rgcn: dimensions must be positive");
    Rng rng(seed);
    auto glorot = [&rng](std::size_t in, std::size_t out) {
        Matrix w(in, out);
        const double s = std::sqrt(6.0 / static_cast<double>(in + out));
        for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-s, s);
        return w;
    };
    weights_.resize(layers);
    for (int k = 0; k < layers; ++k) {
        const std::size_t in = (k == 0) ? input_dim : hidden_dim;
        for (int r = 0; r <= kRelationCount; ++r) weights_[k][r] = glorot(in, hidden_dim);
    }
    head_w_.resize(hidden_dim);
    const double s = std::sqrt(6.0 / static_cast<double>(hidden_dim + 1));
    for (auto& w : head_w_) w = rng.uniform(-s, s);
    head_b_ = 0.0;
}

namespace {

// out.row(i) = mean of H rows over i's neighbors under one relation.
void aggregate_mean(const HeteroGraph& g, Relation rel, const Matrix& H, Matrix& out) {
    const auto& k = kernels::active();
    const std::size_t d = H.cols();
    out.zero();
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        const auto nbrs = g.neighbors(static_cast<NodeId>(i), rel);
        if (nbrs.empty()) continue;
        double* row = out.row(i);
        for (NodeId j : nbrs) k.axpy(1.0, H.row(j), row, d);
        k.scal(1.0 / static_cast<double>(nbrs.size()), row, d);
    }
}

// Adjoint of aggregate_mean: out.row(j) += sum over i with j in N_i of G.row(i)/|N_i|.
void aggregate_mean_adjoint(const HeteroGraph& g, Relation rel, const Matrix& G, Matrix& out) {
    const auto& k = kernels::active();
    const std::size_t d = G.cols();
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        const auto nbrs = g.neighbors(static_cast<NodeId>(i), rel);
        if (nbrs.empty()) continue;
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        for (NodeId j : nbrs) k.axpy(inv, G.row(i), out.row(j), d);
    }
}

struct ForwardState {
    std::vector<Matrix> h;                  // h[0] = encoding, h[k+1] = ReLU(z[k])
    std::vector<Matrix> z;                  // pre-activations per layer
    std::vector<std::array<Matrix, 3>> m;   // per layer, per relation aggregates
    std::vector<double> logits;             // per node
    std::vector<double> probs;              // per node
};

ForwardState run_forward(const RgcnModel& model, const HeteroGraph& g, const Matrix& enc,
                         bool keep_intermediates) {
    if (enc.rows() != g.n_nodes() || static_cast<int>(enc.cols()) != model.input_dim())
        throw std::invalid_argument("rgcn_forward: encoding shape mismatch");
    const auto& kr = kernels::active();
    const std::size_t n = g.n_nodes();
    ForwardState st;
    st.h.push_back(enc);
    if (keep_intermediates) {
        st.z.reserve(model.layers());
        st.m.resize(model.layers());
    }
    for (int k = 0; k < model.layers(); ++k) {
        const auto& W = model.layer(k);
        const Matrix& H = st.h.back();
        Matrix Z(n, W[0].cols());
        for (int r = 0; r < kRelationCount; ++r) {
            Matrix M(n, H.cols());
            aggregate_mean(g, static_cast<Relation>(r), H, M);
            matmul_acc(M, W[r], Z);
            if (keep_intermediates) st.m[k][r] = std::move(M);
        }
        matmul_acc(H, W[kRelationCount], Z);  // self term
        Matrix next = Z;
        kr.relu(next.data(), next.size());
        if (keep_intermediates) st.z.push_back(std::move(Z));
        st.h.push_back(std::move(next));
    }
    const Matrix& top = st.h.back();
    st.logits.resize(n);
    st.probs.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        st.logits[i] = kr.dot(top.row(i), model.head_weights().data(), top.cols()) +
                       model.head_bias();
    kernels::sigmoid(st.logits.data(), st.probs.data(), n);
    for (double p : st.probs)
        if (!std::isfinite(p)) throw std::runtime_error("rgcn_forward: non-finite output");
    return st;
}

void check_labels(const HeteroGraph& g, std::span<const MessageLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("rgcn: no labeled messages");
    for (const auto& l : labels)
        if (!g.has_node(l.id) || !g.is_message(l.id))
            throw std::invalid_argument("rgcn: label on non-message node " + std::to_string(l.id));
}

double bce_loss(std::span<const MessageLabel> labels, const std::vector<double>& probs) {
    double loss = 0.0;
    const double eps = 1e-12;
    for (const auto& l : labels) {
        const double p = std::clamp(probs[l.id], eps, 1.0 - eps);
        loss -= l.is_rumor ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(labels.size());
}

}  // namespace

std::vector<double> rgcn_forward(const RgcnModel& model, const HeteroGraph& g,
                                 const Matrix& encoding) {
    return run_forward(model, g, encoding, false).probs;
}

double rgcn_loss(const RgcnModel& model, const HeteroGraph& g, const Matrix& encoding,
                 std::span<const MessageLabel> labels) {
    check_labels(g, labels);
    return bce_loss(labels, run_forward(model, g, encoding, false).probs);
}

RgcnGradients rgcn_loss_and_gradients(const RgcnModel& model, const HeteroGraph& g,
                                      const Matrix& encoding,
                                      std::span<const MessageLabel> labels) {
    check_labels(g, labels);
    const auto& kr = kernels::active();
    const std::size_t n = g.n_nodes();
    ForwardState st = run_forward(model, g, encoding, true);

    RgcnGradients grad;
    grad.loss = bce_loss(labels, st.probs);
    grad.weights.resize(model.layers());
    for (int k = 0; k < model.layers(); ++k)
        for (int r = 0; r <= kRelationCount; ++r)
            grad.weights[k][r] = Matrix(model.layer(k)[r].rows(), model.layer(k)[r].cols());
    grad.head_w.assign(model.hidden_dim(), 0.0);

    // head: dL/dlogit = (p - y)/|labels| on labeled messages
    std::vector<double> dlogit(n, 0.0);
    const double inv = 1.0 / static_cast<double>(labels.size());
    for (const auto& l : labels) dlogit[l.id] = (st.probs[l.id] - l.is_rumor) * inv;

    const Matrix& top = st.h.back();
    Matrix dH(n, top.cols());
    for (std::size_t i = 0; i < n; ++i) {
        if (dlogit[i] == 0.0) continue;
        kr.axpy(dlogit[i], top.row(i), grad.head_w.data(), top.cols());
        kr.axpy(dlogit[i], model.head_weights().data(), dH.row(i), top.cols());
        grad.head_b += dlogit[i];
    }

    for (int k = model.layers() - 1; k >= 0; --k) {
        // dZ = dH masked by ReLU
        Matrix& dZ = dH;
        kr.relu_backward(st.z[k].data(), dZ.data(), dZ.size());

        const Matrix& H = st.h[k];
        Matrix dHprev(n, H.cols());
        for (int r = 0; r < kRelationCount; ++r) {
            matmul_tn_acc(st.m[k][r], dZ, grad.weights[k][r]);  // dW_r += M_r^T dZ
            Matrix G(n, H.cols());
            matmul_nt_acc(dZ, model.layer(k)[r], G);            // G = dZ W_r^T
            aggregate_mean_adjoint(g, static_cast<Relation>(r), G, dHprev);
        }
        matmul_tn_acc(H, dZ, grad.weights[k][kRelationCount]);  // self weight
        matmul_nt_acc(dZ, model.layer(k)[kRelationCount], dHprev);
        dH = std::move(dHprev);
    }
    return grad;
}

std::vector<double> rgcn_train(RgcnModel& model, const HeteroGraph& g, const Matrix& encoding,
                               std::span<const MessageLabel> labels, const TrainConfig& cfg) {
    check_labels(g, labels);
    const auto& kr = kernels::active();
    std::vector<double> history;
    history.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        RgcnGradients grad = rgcn_loss_and_gradients(model, g, encoding, labels);
        if (!std::isfinite(grad.loss))
            throw std::runtime_error("rgcn_train: loss diverged at epoch " +
                                     std::to_string(epoch));
        history.push_back(grad.loss);
        for (int k = 0; k < model.layers(); ++k)
            for (int r = 0; r <= kRelationCount; ++r)
                kr.axpy(-cfg.learning_rate, grad.weights[k][r].data(),
                        model.layer(k)[r].data(), grad.weights[k][r].size());
        kr.axpy(-cfg.learning_rate, grad.head_w.data(), model.head_weights().data(),
                grad.head_w.size());
        model.head_bias() -= cfg.learning_rate * grad.head_b;
    }
    return history;
}

RankingSnapshot rgcn_snapshot(const RgcnModel& model, const HeteroGraph& g,
                              const NodeEncoder& enc, int step_tag) {
    const auto probs = rgcn_forward(model, g, enc.encode(g));
    const auto messages = g.nodes_of_kind(NodeKind::Message);
    std::vector<double> p(messages.size());
    for (std::size_t i = 0; i < messages.size(); ++i) p[i] = probs[messages[i]];
    return build_snapshot(g.n_nodes(), messages, p, step_tag);
}

EvalMetrics rgcn_evaluate(const RgcnModel& model, const HeteroGraph& g, const NodeEncoder& enc,
                          std::span<const MessageLabel> labels, const TargetSet& ndcg_targets) {
    check_labels(g, labels);
    const RankingSnapshot snap = rgcn_snapshot(model, g, enc);
    EvalMetrics m;
    std::size_t correct = 0, tp = 0, pos = 0;
    for (const auto& l : labels) {
        const bool pred = snap.prob_of[l.id] > 0.5;
        if (pred == (l.is_rumor != 0)) ++correct;
        if (l.is_rumor) {
            ++pos;
            if (pred) ++tp;
        }
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
    m.recall = pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
    m.ndcg = ndcg(ndcg_targets, snap);
    return m;
}

}  // namespace relab
