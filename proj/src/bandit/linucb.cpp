#include "relab/bandit/linucb.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace relab {

LinUcbPolicy::LinUcbPolicy(int dim, double alpha)
    : dim_(dim), alpha_(alpha), A_(Matrix::identity(dim)), b_(dim, 0.0), theta_(dim, 0.0) {
    if (dim < 1) throw std::invalid_argument("linucb: dimension must be positive");
    if (alpha < 0.0) throw std::invalid_argument("linucb: alpha must be >= 0");
}

const Cholesky& LinUcbPolicy::factor() const {
    if (!chol_) chol_.emplace(A_);
    return *chol_;
}

double LinUcbPolicy::score(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("linucb: candidate dimension mismatch");
    const double exploit = kernels::active().dot(x.data(), theta_.data(), x.size());
    if (alpha_ == 0.0) return exploit;
    return exploit + alpha_ * std::sqrt(factor().inverse_quadratic_form(x));
}

int LinUcbPolicy::select(std::span<const std::vector<double>> candidates) const {
    if (candidates.empty()) throw std::invalid_argument("linucb: empty candidate list");
    int best = 0;
    double best_score = score(candidates[0]);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double s = score(candidates[i]);
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void LinUcbPolicy::update_episode(std::span<const std::vector<double>> xs,
                                  std::span<const double> rewards) {
    if (xs.size() != rewards.size())
        throw std::invalid_argument("linucb: samples/rewards size mismatch");
    if (xs.empty()) return;
    const auto& k = kernels::active();
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const auto& x = xs[t];
        if (x.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("linucb: sample dimension mismatch");
        for (int i = 0; i < dim_; ++i)
            k.axpy(x[i], x.data(), A_.row(i), dim_);  // A += x xᵀ
        k.axpy(rewards[t], x.data(), b_.data(), dim_);
        ++samples_;
    }
    chol_.reset();
    theta_ = factor().solve(b_);
}

double LinUcbPolicy::inverse_quadratic_form(std::span<const double> x) const {
    return factor().inverse_quadratic_form(x);
}

std::vector<double> closed_form_theta(const Matrix& X, std::span<const double> r) {
    if (X.rows() != r.size())
        throw std::invalid_argument("closed_form_theta: rows/rewards size mismatch");
    const std::size_t d = X.cols();
    Matrix G = Matrix::identity(d);
    matmul_tn_acc(X, X, G);  // G = XᵀX + I
    std::vector<double> rhs(d, 0.0);
    const auto& k = kernels::active();
    for (std::size_t t = 0; t < X.rows(); ++t) k.axpy(r[t], X.row(t), rhs.data(), d);
    return Cholesky(G).solve(rhs);
}

std::string LinUcbPolicy::to_json(std::uint64_t schema_hash, const std::string& level) const {
    nlohmann::json j;
    j["format"] = "relab-policy";
    j["version"] = 1;
    j["level"] = level;
    j["dim"] = dim_;
    j["alpha"] = alpha_;
    j["samples"] = samples_;
    j["schema_hash"] = schema_hash;
    j["A"] = std::vector<double>(A_.data(), A_.data() + A_.size());
    j["b"] = b_;
    j["theta"] = theta_;
    return j.dump(2);
}

LinUcbPolicy LinUcbPolicy::from_json(const std::string& text,
                                     std::uint64_t expected_schema_hash) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "relab-policy")
        throw std::runtime_error("policy checkpoint: wrong format tag");
    if (j.at("schema_hash").get<std::uint64_t>() != expected_schema_hash)
        throw std::runtime_error(
            "policy checkpoint: feature schema hash mismatch; refusing to load misaligned "
            "weights");
    LinUcbPolicy p(j.at("dim").get<int>(), j.at("alpha").get<double>());
    const auto a = j.at("A").get<std::vector<double>>();
    if (a.size() != p.A_.size())
        throw std::runtime_error("policy checkpoint: A size mismatch");
    std::copy(a.begin(), a.end(), p.A_.data());
    p.b_ = j.at("b").get<std::vector<double>>();
    p.theta_ = j.at("theta").get<std::vector<double>>();
    p.samples_ = j.at("samples").get<long>();
    p.level_ = j.value("level", "");
    if (p.b_.size() != static_cast<std::size_t>(p.dim_) ||
        p.theta_.size() != static_cast<std::size_t>(p.dim_))
        throw std::runtime_error("policy checkpoint: vector size mismatch");
    return p;
}

}  // namespace relab
