#include "relab/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relab {

RankingSnapshot build_snapshot(std::size_t n_nodes, std::span<const NodeId> message_ids,
                               std::span<const double> probabilities, int step_tag) {
    if (message_ids.size() != probabilities.size())
        throw std::invalid_argument("build_snapshot: ids/probabilities size mismatch");
    RankingSnapshot s;
    s.step_tag = step_tag;
    const std::size_t n = message_ids.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (probabilities[a] != probabilities[b]) return probabilities[a] > probabilities[b];
        return message_ids[a] < message_ids[b];
    });
    s.by_rank.resize(n);
    s.prob_by_rank.resize(n);
    s.rank_of.assign(n_nodes, 0);
    s.prob_of.assign(n_nodes, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const NodeId id = message_ids[order[r]];
        s.by_rank[r] = id;
        s.prob_by_rank[r] = probabilities[order[r]];
        s.rank_of[id] = static_cast<int>(r + 1);
        s.prob_of[id] = probabilities[order[r]];
    }
    return s;
}

}  // namespace relab
