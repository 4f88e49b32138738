#include "relab/bandit/diagnostics.hpp"

#include <stdexcept>

namespace relab {

VarianceCheck variance_check(const Matrix& rewards) {
    const std::size_t e = rewards.rows(), t = rewards.cols();
    if (e == 0 || t == 0) throw std::invalid_argument("variance_check: empty reward matrix");
    const auto n = static_cast<double>(e * t);

    const auto pooled_variance = [n](const Matrix& m) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) mean += m.data()[i];
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double d = m.data()[i] - mean;
            var += d * d;
        }
        return var / n;
    };

    VarianceCheck out;
    out.sigma2 = pooled_variance(rewards);

    Matrix centered = rewards;
    for (std::size_t j = 0; j < t; ++j) {
        double col_mean = 0.0;
        for (std::size_t i = 0; i < e; ++i) col_mean += rewards(i, j);
        col_mean /= static_cast<double>(e);
        for (std::size_t i = 0; i < e; ++i) centered(i, j) -= col_mean;
    }
    out.sigma2_prime = pooled_variance(centered);
    out.ok = out.sigma2 >= out.sigma2_prime - 1e-12;
    return out;
}

double inverse_beta_ml(std::span<const double> residuals) {
    if (residuals.size() < 2)
        throw std::invalid_argument("inverse_beta_ml: need at least two residuals");
    double s = 0.0;
    for (double r : residuals) s += r * r;
    return s / static_cast<double>(residuals.size());
}

double predictive_variance(const LinUcbPolicy& policy, std::span<const double> x,
                           double inverse_beta) {
    return inverse_beta + policy.inverse_quadratic_form(x);
}

}  // namespace relab
