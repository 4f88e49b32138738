#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relab/core/cholesky.hpp"
#include "relab/core/matrix.hpp"

namespace relab {

// Linear UCB policy over state-action vectors: ridge accumulator A = I + Σxxᵀ,
// response accumulator b = Σ r̃ x, weights θ = A⁻¹b, and exploration bonus
// α·sqrt(xᵀA⁻¹x). One instance per hierarchy level.
//
// select() is const and safe under concurrent callers; updates happen at
// episode boundaries under exclusive access.
class LinUcbPolicy {
public:
    LinUcbPolicy(int dim, double alpha);

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    const Matrix& A() const { return A_; }
    std::span<const double> b() const { return b_; }
    std::span<const double> theta() const { return theta_; }
    long samples_consumed() const { return samples_; }

    // Exploitation + exploration score of one candidate.
    double score(std::span<const double> x) const;

    // argmax over candidates; ties break to the lowest index. Throws on empty.
    int select(std::span<const std::vector<double>> candidates) const;

    // End-of-episode batch update with baseline-adjusted rewards.
    void update_episode(std::span<const std::vector<double>> xs,
                        std::span<const double> rewards);

    // xᵀA⁻¹x, exposed for the predictive-variance diagnostics.
    double inverse_quadratic_form(std::span<const double> x) const;

    std::string to_json(std::uint64_t schema_hash, const std::string& level) const;
    // Throws if the stored schema hash disagrees with expected_schema_hash.
    static LinUcbPolicy from_json(const std::string& text, std::uint64_t expected_schema_hash);
    const std::string& level() const { return level_; }

private:
    const Cholesky& factor() const;

    int dim_;
    double alpha_;
    Matrix A_;
    std::vector<double> b_;
    std::vector<double> theta_;
    long samples_ = 0;
    std::string level_;
    mutable std::optional<Cholesky> chol_;
};

// θ* = (XᵀX + I)⁻¹ Xᵀ r via Cholesky on the (always SPD) normal matrix; rows
// of X are the sample vectors. No explicit inverse is formed.
std::vector<double> closed_form_theta(const Matrix& X, std::span<const double> r);

}  // namespace relab
