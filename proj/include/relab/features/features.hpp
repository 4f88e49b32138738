#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relab/graph/analytics.hpp"
#include "relab/graph/graph.hpp"
#include "relab/objective/ndcg.hpp"
#include "relab/ranking.hpp"

namespace relab {

// Interpretable state-action features at subgraph (connected component) and
// node level: structural, social, influence, attack-potential and
// ranking-help-message groups. Slot order is the contract — policy weights
// stay aligned to it for a whole run, and the schema hash guards reloads.

enum class SlotNorm : std::uint8_t {
    Unit,  // intrinsic [0,1] range (ratios, probabilities, attack degrees)
    Fit,   // min-max fitted on the clean graph
};

struct SlotDef {
    const char* name;
    SlotNorm norm;
};

std::span<const SlotDef> subgraph_schema();
std::span<const SlotDef> node_schema();
inline int subgraph_dim() { return static_cast<int>(subgraph_schema().size()); }
inline int node_dim() { return static_cast<int>(node_schema().size()); }

// FNV-1a over level, index, name and normalization of every slot.
std::uint64_t schema_hash();
// Machine-readable ordered slot table (index map), as a JSON string.
std::string schema_index_map_json();

// Attack bookkeeping the potential/attack-degree features read.
struct AttackCounters {
    std::vector<int> per_node;                        // incident added edges
    std::vector<std::pair<NodeId, NodeId>> added;     // chronological (user,message)
    void reset(std::size_t n_nodes) {
        per_node.assign(n_nodes, 0);
        added.clear();
    }
    void record(NodeId user, NodeId message) {
        ++per_node[user];
        ++per_node[message];
        added.emplace_back(user, message);
    }
    // added edges lying inside the component with this root
    int in_component(const HeteroGraph& g, NodeId root) const {
        int c = 0;
        for (const auto& [u, m] : added)
            if (g.component_root(u) == root) ++c;
        return c;
    }
};

// Read-only bundle the extractors work against. Extraction never mutates any
// of it; candidate evaluation may run concurrently over one view.
struct WorldView {
    const HeteroGraph& g;
    const RankingSnapshot& snap;
    const InfluenceTable& influence;
    const AttackCounters& counters;
    std::span<const std::uint8_t> is_target;   // by node id
    std::span<const std::uint8_t> is_rhm;      // by node id (non-target rumors)
    std::span<const std::uint8_t> bad_author;  // by node id, frozen on clean graph
    int horizon = 1;
    int khop = 3;
};

// Raw (un-normalized) vectors; NaN marks the one imputable slot
// (n_targets_distance with no target in range).
std::vector<double> subgraph_features_raw(const WorldView& w, NodeId component_root,
                                          std::span<const NodeId> component_nodes);
std::vector<double> node_features_raw(const WorldView& w, NodeId v);

// Per-slot clean-graph bounds. Unit slots keep (0,1); Fit slots are fitted
// over all components/nodes; degenerate Fit slots (min==max) normalize to 0
// and are flagged.
class FeatureBounds {
public:
    static FeatureBounds fit(const WorldView& clean);

    std::vector<double> normalize_subgraph(std::span<const double> raw) const;
    std::vector<double> normalize_node(std::span<const double> raw) const;
    // Inverse affine map (no clamp); identity for constant slots.
    double denormalize_subgraph(int slot, double y) const;
    double denormalize_node(int slot, double y) const;

    bool subgraph_slot_constant(int slot) const { return g_constant_[slot] != 0; }
    bool node_slot_constant(int slot) const { return n_constant_[slot] != 0; }
    std::pair<double, double> subgraph_bounds(int slot) const { return {g_lo_[slot], g_hi_[slot]}; }
    std::pair<double, double> node_bounds(int slot) const { return {n_lo_[slot], n_hi_[slot]}; }

private:
    std::vector<double> g_lo_, g_hi_, n_lo_, n_hi_;
    std::vector<std::uint8_t> g_constant_, n_constant_;
};

// Normalized feature vectors (every entry in [0,1]).
std::vector<double> subgraph_features(const WorldView& w, NodeId component_root,
                                      std::span<const NodeId> component_nodes,
                                      const FeatureBounds& bounds);
std::vector<double> node_features(const WorldView& w, NodeId v, const FeatureBounds& bounds);

// x(s,a) = a ⊕ b, (source-of-target side, controllable side). Throws on
// schema (dimension) mismatch.
std::vector<double> pair_vector(std::span<const double> a, std::span<const double> b);

}  // namespace relab
