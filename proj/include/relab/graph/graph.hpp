#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace relab {

using NodeId = std::int32_t;

enum class NodeKind : std::uint8_t { Message, User, Comment };

// Edge relations of the heterogeneous social graph. A relation is determined
// by its endpoint kinds: L1 user-message (post/re-post), L2 message-comment,
// L3 user-user (re-post social ties).
enum class Relation : std::uint8_t { L1 = 0, L2 = 1, L3 = 2 };
inline constexpr int kRelationCount = 3;

const char* to_string(NodeKind k);
const char* to_string(Relation r);

struct NodeSpec {
    NodeId id = 0;
    NodeKind kind = NodeKind::Message;
    bool is_author = false;  // users only
    int label = -1;          // messages: 1 rumor, 0 non-rumor, -1 unknown
};

struct EdgeSpec {
    NodeId src = 0;
    NodeId dst = 0;
    Relation rel = Relation::L1;
};

struct MessageLabel {
    NodeId id = 0;
    int is_rumor = 0;  // 1 or 0
};

// Undirected heterogeneous social graph with a connected-component index
// maintained by union-find. Nodes are dense [0,|V|). No self-loops, no
// duplicate edges; every edge's relation matches its endpoint kinds.
//
// Thread contract: all const queries are safe under concurrent readers;
// add_attack_edge requires exclusive access (single writer, no interior
// mutation happens during const calls).
class HeteroGraph {
public:
    // Validates kinds, density, relation consistency, duplicates, self-loops.
    // Throws std::invalid_argument naming the offending record.
    static HeteroGraph build(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges);

    // Adds one L1 edge between a user and a message and merges their
    // components. With induced_l3, additionally connects the user to every
    // pre-existing user neighbor of the message (re-post social ties).
    void add_attack_edge(NodeId user, NodeId message, bool induced_l3 = false);

    std::size_t n_nodes() const { return kinds_.size(); }
    std::size_t n_edges() const { return n_edges_; }
    std::size_t n_edges(Relation r) const { return rel_edge_count_[static_cast<int>(r)]; }

    NodeKind kind(NodeId v) const { return kinds_[v]; }
    bool is_message(NodeId v) const { return kinds_[v] == NodeKind::Message; }
    bool is_user(NodeId v) const { return kinds_[v] == NodeKind::User; }
    bool is_comment(NodeId v) const { return kinds_[v] == NodeKind::Comment; }
    bool is_author(NodeId v) const { return author_[v] != 0; }
    // 1 rumor, 0 non-rumor, -1 unknown; meaningful for messages only
    int rumor_label(NodeId v) const { return label_[v]; }

    std::span<const NodeId> neighbors(NodeId v, Relation r) const { return adj_[static_cast<int>(r)][v]; }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_all_[v]; }
    std::size_t degree(NodeId v) const { return adj_all_[v].size(); }

    bool has_node(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < kinds_.size(); }
    bool has_edge(NodeId a, NodeId b) const { return edge_set_.count(edge_key(a, b)) != 0; }

    // Component (subgraph) queries. Roots are stable between mutations.
    NodeId component_root(NodeId v) const;
    bool same_component(NodeId a, NodeId b) const { return component_root(a) == component_root(b); }
    std::size_t component_count() const { return component_count_; }
    // Members grouped by root, each group sorted; groups ordered by root id.
    std::vector<std::pair<NodeId, std::vector<NodeId>>> components() const;

    // Canonical edge list (a<b, sorted), e.g. for serialization and hashing.
    std::vector<EdgeSpec> canonical_edges() const;

    // FNV-1a over kinds, flags and the canonical edge list.
    std::uint64_t hash() const;

    // Re-checks every stored invariant; throws on violation. Test support.
    void validate() const;

    std::vector<NodeId> nodes_of_kind(NodeKind k) const;

private:
    static std::uint64_t edge_key(NodeId a, NodeId b);
    static std::optional<Relation> relation_for(NodeKind a, NodeKind b);
    void add_edge_unchecked(NodeId a, NodeId b, Relation r);
    NodeId find(NodeId v) const;
    void unite(NodeId a, NodeId b);

    std::vector<NodeKind> kinds_;
    std::vector<std::uint8_t> author_;
    std::vector<std::int8_t> label_;
    std::vector<std::vector<NodeId>> adj_[kRelationCount];
    std::vector<std::vector<NodeId>> adj_all_;
    std::unordered_set<std::uint64_t> edge_set_;
    std::size_t rel_edge_count_[kRelationCount] = {0, 0, 0};
    std::size_t n_edges_ = 0;

    mutable std::vector<NodeId> parent_;  // path compression only
    std::vector<std::uint32_t> comp_size_;
    std::size_t component_count_ = 0;
};

}  // namespace relab
