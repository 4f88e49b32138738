#pragma once

#include <span>
#include <vector>

#include "relab/bandit/linucb.hpp"
#include "relab/core/matrix.hpp"

namespace relab {

// Variance comparison underlying the time-dependent control variate: pooled
// variance of an E×T reward matrix before and after subtracting per-step
// column means. The reduction property guarantees sigma2 >= sigma2_prime.
struct VarianceCheck {
    double sigma2 = 0.0;
    double sigma2_prime = 0.0;
    bool ok = false;  // sigma2 >= sigma2_prime - 1e-12
};

VarianceCheck variance_check(const Matrix& rewards);

// 1/beta_ML = mean squared residual (MLE of the noise variance). Needs at
// least two residuals.
double inverse_beta_ml(std::span<const double> residuals);

// Predictive variance of the linear reward model at x: 1/beta + xᵀ A⁻¹ x,
// with the ridge posterior covariance identified with A⁻¹.
double predictive_variance(const LinUcbPolicy& policy, std::span<const double> x,
                           double inverse_beta);

}  // namespace relab
