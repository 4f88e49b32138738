#include "relab/objective/ndcg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace relab {

double ideal_normalizer(std::span<const double> weights) {
    if (weights.empty())
        throw std::invalid_argument("ideal_normalizer: empty target set");
    std::vector<double> w(weights.begin(), weights.end());
    std::sort(w.begin(), w.end(), std::greater<>());
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        z += w[i] / std::log2(static_cast<double>(i) + 2.0);
    return z;
}

TargetSet make_target_set(std::vector<NodeId> ids, std::vector<double> weights, int cutoff,
                          bool indicator_as_printed) {
    if (ids.size() != weights.size())
        throw std::invalid_argument("make_target_set: ids/weights size mismatch");
    if (cutoff < 1) throw std::invalid_argument("make_target_set: cutoff must be >= 1");
    for (double w : weights)
        if (!(w >= 0.0)) throw std::invalid_argument("make_target_set: negative weight");
    TargetSet t;
    t.normalizer = ideal_normalizer(weights);
    t.ids = std::move(ids);
    t.weights = std::move(weights);
    t.cutoff = cutoff;
    t.indicator_as_printed = indicator_as_printed;
    return t;
}

double ndcg(const TargetSet& targets, const RankingSnapshot& snap) {
    double sum = 0.0;
    for (std::size_t i = 0; i < targets.ids.size(); ++i) {
        const NodeId v = targets.ids[i];
        if (!snap.ranked(v))
            throw std::invalid_argument("ndcg: target " + std::to_string(v) +
                                        " missing from snapshot");
        const int rank = snap.rank_of[v];
        const bool counted = targets.indicator_as_printed ? (rank > targets.cutoff)
                                                          : (rank <= targets.cutoff);
        if (counted)
            sum += targets.weights[i] / std::log2(static_cast<double>(rank) + 1.0);
    }
    return sum / targets.normalizer;
}

RankMovement tdrop_rrise(const RankingSnapshot& before, const RankingSnapshot& after,
                         const TargetSet& targets, std::span<const NodeId> rhm,
                         std::span<const NodeId> scope) {
    if (before.n_ranked() != after.n_ranked())
        throw std::invalid_argument("tdrop_rrise: snapshots rank different universes");
    std::unordered_set<NodeId> in_scope(scope.begin(), scope.end());
    const auto scoped = [&](NodeId v) { return scope.empty() || in_scope.count(v) != 0; };

    RankMovement out;
    std::vector<int> target_old_ranks;
    for (NodeId v : targets.ids) {
        if (!scoped(v)) continue;
        target_old_ranks.push_back(before.rank_of[v]);
        const int d = after.rank_of[v] - before.rank_of[v];
        if (d > 0) out.tdrop += d;
    }
    std::sort(target_old_ranks.begin(), target_old_ranks.end());
    for (NodeId h : rhm) {
        if (!scoped(h) || !before.ranked(h)) continue;
        const int rb = before.rank_of[h], ra = after.rank_of[h];
        if (ra >= rb) continue;  // did not rise
        // moved through ranks [ra, rb-1]; displaces a target that held one
        const auto lo = std::lower_bound(target_old_ranks.begin(), target_old_ranks.end(), ra);
        if (lo != target_old_ranks.end() && *lo <= rb - 1) out.rrise += rb - ra;
    }
    return out;
}

}  // namespace relab
