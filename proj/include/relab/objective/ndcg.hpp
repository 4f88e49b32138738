#pragma once

#include <span>
#include <vector>

#include "relab/ranking.hpp"

namespace relab {

// The attacker's objective: a weighted, rank-discounted, cutoff-truncated
// suspiciousness score over the target rumors, normalized into [0,1] by the
// ideal-DCG constant Z. The attacker minimizes it.
struct TargetSet {
    std::vector<NodeId> ids;
    std::vector<double> weights;  // aligned with ids, >= 0
    int cutoff = 1;               // rank cutoff m
    double normalizer = 1.0;      // Z
    // The truncation indicator is rank<=m; the literal printed form rank>m is
    // kept as a study mode because it contradicts its own surrounding prose.
    bool indicator_as_printed = false;
};

// Z = sum of w_(i)/log2(i+1) with weights sorted descending. Throws on empty.
double ideal_normalizer(std::span<const double> weights);

TargetSet make_target_set(std::vector<NodeId> ids, std::vector<double> weights, int cutoff,
                          bool indicator_as_printed = false);

// J in [0,1]. Throws if a target is missing from the snapshot.
double ndcg(const TargetSet& targets, const RankingSnapshot& snap);

inline double delta_total(double j0, double jT) { return j0 - jT; }
inline double delta_step(double j_prev, double j_cur) { return j_prev - j_cur; }

struct RankMovement {
    long tdrop = 0;  // total positions target rumors fell (rank number grew)
    long rrise = 0;  // total positions RHMs rose while displacing a target
};

// TDrop/RRise over one step. Scope restricts both targets and RHMs to a node
// set (empty scope = everything). An RHM "displaces a target" when the rank
// interval it moved through contains a rank a scoped target held before.
RankMovement tdrop_rrise(const RankingSnapshot& before, const RankingSnapshot& after,
                         const TargetSet& targets, std::span<const NodeId> rhm,
                         std::span<const NodeId> scope);

}  // namespace relab
