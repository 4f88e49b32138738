#include "relab/bandit/reward.hpp"

#include <algorithm>

#include "relab/kernels/kernels.hpp"

namespace relab {

const char* to_string(BaselineMode m) {
    switch (m) {
        case BaselineMode::None: return "none";
        case BaselineMode::TimeDependent: return "time";
        case BaselineMode::Constant: return "constant";
        case BaselineMode::GraphBucket: return "graph";
        case BaselineMode::StateFunction: return "function";
    }
    return "?";
}

const char* to_string(CreditMode m) {
    return m == CreditMode::StepWise ? "step-wise" : "delayed";
}

BaselineMode baseline_mode_from_string(const std::string& s) {
    if (s == "none") return BaselineMode::None;
    if (s == "time") return BaselineMode::TimeDependent;
    if (s == "constant" || s == "step") return BaselineMode::Constant;
    if (s == "graph") return BaselineMode::GraphBucket;
    if (s == "function") return BaselineMode::StateFunction;
    throw std::invalid_argument("unknown baseline mode: " + s);
}

CreditMode credit_mode_from_string(const std::string& s) {
    if (s == "step-wise" || s == "step") return CreditMode::StepWise;
    if (s == "delayed" || s == "delay") return CreditMode::Delayed;
    throw std::invalid_argument("unknown credit mode: " + s);
}

RewardShaper RewardShaper::calibrate(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("reward shaper: no calibration samples");
    double lo = samples[0], hi = samples[0];
    for (double s : samples) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double width = hi - lo;
    if (width < 1e-12) return RewardShaper(lo - 1e-6, hi + 1e-6);
    return RewardShaper(lo - 0.05 * width, hi + 0.05 * width);
}

double LinearValueBaseline::predict(std::span<const double> x) const {
    if (w_.empty()) return 0.0;
    return kernels::active().dot(w_.data(), x.data(), std::min(w_.size(), x.size())) + c_;
}

void LinearValueBaseline::fit_episode(std::span<const std::vector<double>> xs,
                                      std::span<const double> rs, double lr, int passes) {
    if (xs.empty()) return;
    if (w_.empty()) w_.assign(xs[0].size(), 0.0);
    const auto& k = kernels::active();
    for (int p = 0; p < passes; ++p) {
        for (std::size_t t = 0; t < xs.size(); ++t) {
            const double err = predict(xs[t]) - rs[t];
            k.axpy(-lr * err, xs[t].data(), w_.data(), w_.size());
            c_ -= lr * err;
        }
    }
}

double BaselineState::adjust(int level, int t, long bucket_key, std::span<const double> x,
                             double r) const {
    switch (mode_) {
        case BaselineMode::None: return r;
        case BaselineMode::TimeDependent: return r - step_.value(t);
        case BaselineMode::Constant:
            return r - (const_count_ ? const_sum_ / static_cast<double>(const_count_) : 0.0);
        case BaselineMode::GraphBucket: {
            const auto it = buckets_[level].find(bucket_key);
            if (it == buckets_[level].end() || it->second.second == 0) return r;
            return r - it->second.first / static_cast<double>(it->second.second);
        }
        case BaselineMode::StateFunction: return r - fn_[level].predict(x);
    }
    return r;
}

void BaselineState::record_level(int level, long bucket_key, double r) {
    if (mode_ != BaselineMode::GraphBucket) return;
    auto& [sum, count] = buckets_[level][bucket_key];
    sum += r;
    ++count;
}

void BaselineState::record_shared(int t, double r) {
    if (mode_ == BaselineMode::TimeDependent) step_.record(t, r);
    if (mode_ == BaselineMode::Constant) {
        const_sum_ += r;
        ++const_count_;
    }
}

void BaselineState::finish_episode(int level, std::span<const std::vector<double>> xs,
                                   std::span<const double> rs) {
    if (mode_ == BaselineMode::StateFunction) fn_[level].fit_episode(xs, rs);
}

}  // namespace relab
