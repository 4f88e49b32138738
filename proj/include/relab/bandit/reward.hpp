#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relab {

// Min-max reward shaping of step-wise NDCG changes into [0,1]. Bounds come
// from a rule-based calibration pass (widened 10%) and stay fixed for the run.
class RewardShaper {
public:
    RewardShaper() = default;
    RewardShaper(double lo, double hi) { set_bounds(lo, hi); }

    void set_bounds(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("reward shaper: need min < max");
        lo_ = lo;
        hi_ = hi;
        calibrated_ = true;
    }
    bool calibrated() const { return calibrated_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double shape(double delta_ndcg) const {
        if (!calibrated_) throw std::logic_error("reward shaper: bounds not calibrated");
        const double r = (delta_ndcg - lo_) / (hi_ - lo_);
        return r < 0.0 ? 0.0 : (r > 1.0 ? 1.0 : r);
    }

    // Observed (min,max) widened by 10% of the range; degenerate samples fall
    // back to a symmetric epsilon band.
    static RewardShaper calibrate(std::span<const double> samples);

private:
    double lo_ = 0.0, hi_ = 1.0;
    bool calibrated_ = false;
};

// Running per-step mean of rewards across trajectories, the time-dependent
// control variate V(t). The default sum/count representation keeps the stored
// value equal to the arithmetic mean of the recorded samples, exactly; a
// nonzero ewma rate switches to an exponentially-weighted mean for
// nonstationarity studies.
class StepBaseline {
public:
    explicit StepBaseline(int horizon, double ewma = 0.0)
        : ewma_(ewma), sum_(horizon, 0.0), count_(horizon, 0) {
        if (ewma < 0.0 || ewma >= 1.0)
            throw std::invalid_argument("step baseline: ewma rate must be in [0,1)");
    }
    int horizon() const { return static_cast<int>(sum_.size()); }
    // t is 1-based
    double value(int t) const {
        check(t);
        if (count_[t - 1] == 0) return 0.0;
        return ewma_ > 0.0 ? sum_[t - 1]
                           : sum_[t - 1] / static_cast<double>(count_[t - 1]);
    }
    long count(int t) const {
        check(t);
        return count_[t - 1];
    }
    void record(int t, double r) {
        check(t);
        if (ewma_ > 0.0)
            sum_[t - 1] = count_[t - 1] == 0 ? r : (1.0 - ewma_) * sum_[t - 1] + ewma_ * r;
        else
            sum_[t - 1] += r;
        ++count_[t - 1];
    }

private:
    void check(int t) const {
        if (t < 1 || t > horizon()) throw std::out_of_range("step baseline: t out of range");
    }
    double ewma_;
    std::vector<double> sum_;  // plain sum, or the weighted mean itself
    std::vector<long> count_;
};

enum class BaselineMode { None, TimeDependent, Constant, GraphBucket, StateFunction };
enum class CreditMode { StepWise, Delayed };

const char* to_string(BaselineMode m);
const char* to_string(CreditMode m);
BaselineMode baseline_mode_from_string(const std::string& s);
CreditMode credit_mode_from_string(const std::string& s);

// Linear state-value regressor V(x) = w·x + c for the state-function
// comparison baseline; refit by SGD on each finished episode.
class LinearValueBaseline {
public:
    double predict(std::span<const double> x) const;
    void fit_episode(std::span<const std::vector<double>> xs, std::span<const double> rs,
                     double lr = 0.05, int passes = 5);

private:
    std::vector<double> w_;
    double c_ = 0.0;
};

// Reward baseline machinery shared by both hierarchy levels. adjust() returns
// r̃ = r - b(·) using only past samples; record() then folds the current one.
class BaselineState {
public:
    BaselineState(BaselineMode mode, int horizon, double ewma = 0.0)
        : mode_(mode), step_(horizon, ewma) {}

    BaselineMode mode() const { return mode_; }

    // level: 0 subgraph, 1 node. bucket_key: attack-edge count of the selected
    // object (GraphBucket mode only).
    double adjust(int level, int t, long bucket_key, std::span<const double> x, double r) const;
    // Per-level bucket folding (GraphBucket mode).
    void record_level(int level, long bucket_key, double r);
    // Time/constant baselines see one r_t per step, shared by both levels.
    void record_shared(int t, double r);
    void finish_episode(int level, std::span<const std::vector<double>> xs,
                        std::span<const double> rs);

    const StepBaseline& step_table() const { return step_; }

private:
    BaselineMode mode_;
    StepBaseline step_;
    double const_sum_ = 0.0;
    long const_count_ = 0;
    std::map<long, std::pair<double, long>> buckets_[2];
    LinearValueBaseline fn_[2];
};

}  // namespace relab
