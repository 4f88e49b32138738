#include "relab/graph/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace relab {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Message: return "message";
        case NodeKind::User: return "user";
        case NodeKind::Comment: return "comment";
    }
    return "?";
}

const char* to_string(Relation r) {
    switch (r) {
        case Relation::L1: return "l1";
        case Relation::L2: return "l2";
        case Relation::L3: return "l3";
    }
    return "?";
}

std::uint64_t HeteroGraph::edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

std::optional<Relation> HeteroGraph::relation_for(NodeKind a, NodeKind b) {
    if (a > b) std::swap(a, b);
    if (a == NodeKind::Message && b == NodeKind::User) return Relation::L1;
    if (a == NodeKind::Message && b == NodeKind::Comment) return Relation::L2;
    if (a == NodeKind::User && b == NodeKind::User) return Relation::L3;
    return std::nullopt;
}

HeteroGraph HeteroGraph::build(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges) {
    HeteroGraph g;
    const std::size_t n = nodes.size();
    g.kinds_.assign(n, NodeKind::Message);
    g.author_.assign(n, 0);
    g.label_.assign(n, -1);
    std::vector<std::uint8_t> seen(n, 0);
    for (const NodeSpec& s : nodes) {
        if (s.id < 0 || static_cast<std::size_t>(s.id) >= n)
            throw std::invalid_argument("graph: node id " + std::to_string(s.id) +
                                        " not dense in [0," + std::to_string(n) + ")");
        if (seen[s.id])
            throw std::invalid_argument("graph: duplicate node id " + std::to_string(s.id));
        seen[s.id] = 1;
        g.kinds_[s.id] = s.kind;
        g.author_[s.id] = (s.kind == NodeKind::User && s.is_author) ? 1 : 0;
        g.label_[s.id] = (s.kind == NodeKind::Message) ? static_cast<std::int8_t>(s.label) : -1;
    }

    for (int r = 0; r < kRelationCount; ++r) g.adj_[r].assign(n, {});
    g.adj_all_.assign(n, {});
    g.parent_.resize(n);
    g.comp_size_.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) g.parent_[i] = static_cast<NodeId>(i);
    g.component_count_ = n;

    for (std::size_t e = 0; e < edges.size(); ++e) {
        const EdgeSpec& spec = edges[e];
        const auto where = [&] {
            return "edge #" + std::to_string(e) + " (" + std::to_string(spec.src) + "," +
                   std::to_string(spec.dst) + "," + to_string(spec.rel) + ")";
        };
        if (!g.has_node(spec.src) || !g.has_node(spec.dst))
            throw std::invalid_argument("graph: dangling id in " + where());
        if (spec.src == spec.dst)
            throw std::invalid_argument("graph: self-loop in " + where());
        const auto rel = relation_for(g.kinds_[spec.src], g.kinds_[spec.dst]);
        if (!rel || *rel != spec.rel)
            throw std::invalid_argument("graph: relation does not match endpoint kinds (" +
                                        std::string(to_string(g.kinds_[spec.src])) + "," +
                                        to_string(g.kinds_[spec.dst]) + ") in " + where());
        if (g.has_edge(spec.src, spec.dst))
            throw std::invalid_argument("graph: duplicate " + where());
        g.add_edge_unchecked(spec.src, spec.dst, spec.rel);
    }
    return g;
}

void HeteroGraph::add_edge_unchecked(NodeId a, NodeId b, Relation r) {
    const int ri = static_cast<int>(r);
    auto insert_sorted = [](std::vector<NodeId>& v, NodeId x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    };
    insert_sorted(adj_[ri][a], b);
    insert_sorted(adj_[ri][b], a);
    insert_sorted(adj_all_[a], b);
    insert_sorted(adj_all_[b], a);
    edge_set_.insert(edge_key(a, b));
    ++rel_edge_count_[ri];
    ++n_edges_;
    unite(a, b);
}

void HeteroGraph::add_attack_edge(NodeId user, NodeId message, bool induced_l3) {
    if (!has_node(user) || !has_node(message))
        throw std::invalid_argument("add_attack_edge: unknown node id");
    if (!is_user(user) || !is_message(message))
        throw std::invalid_argument("add_attack_edge: expected (user,message), got (" +
                                    std::string(to_string(kind(user))) + "," +
                                    to_string(kind(message)) + ")");
    if (has_edge(user, message))
        throw std::invalid_argument("add_attack_edge: edge (" + std::to_string(user) + "," +
                                    std::to_string(message) + ") already present");
    std::vector<NodeId> co_users;
    if (induced_l3)
        for (NodeId u : neighbors(message, Relation::L1)) co_users.push_back(u);
    add_edge_unchecked(user, message, Relation::L1);
    for (NodeId u : co_users)
        if (u != user && !has_edge(user, u)) add_edge_unchecked(user, u, Relation::L3);
}

NodeId HeteroGraph::find(NodeId v) const {
    NodeId root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
        NodeId next = parent_[v];
        parent_[v] = root;
        v = next;
    }
    return root;
}

void HeteroGraph::unite(NodeId a, NodeId b) {
    NodeId ra = find(a), rb = find(b);
    if (ra == rb) return;
    // size-major, id-minor: keeps root choice deterministic
    if (comp_size_[ra] < comp_size_[rb] || (comp_size_[ra] == comp_size_[rb] && rb < ra))
        std::swap(ra, rb);
    parent_[rb] = ra;
    comp_size_[ra] += comp_size_[rb];
    --component_count_;
}

NodeId HeteroGraph::component_root(NodeId v) const {
    if (!has_node(v)) throw std::invalid_argument("component_root: unknown node id");
    return find(v);
}

std::vector<std::pair<NodeId, std::vector<NodeId>>> HeteroGraph::components() const {
    std::vector<std::vector<NodeId>> buckets(n_nodes());
    for (std::size_t v = 0; v < n_nodes(); ++v)
        buckets[find(static_cast<NodeId>(v))].push_back(static_cast<NodeId>(v));
    std::vector<std::pair<NodeId, std::vector<NodeId>>> out;
    out.reserve(component_count_);
    for (std::size_t r = 0; r < buckets.size(); ++r)
        if (!buckets[r].empty()) out.emplace_back(static_cast<NodeId>(r), std::move(buckets[r]));
    return out;
}

std::vector<EdgeSpec> HeteroGraph::canonical_edges() const {
    std::vector<EdgeSpec> out;
    out.reserve(n_edges_);
    for (int r = 0; r < kRelationCount; ++r)
        for (std::size_t a = 0; a < adj_[r].size(); ++a)
            for (NodeId b : adj_[r][a])
                if (static_cast<NodeId>(a) < b)
                    out.push_back({static_cast<NodeId>(a), b, static_cast<Relation>(r)});
    std::sort(out.begin(), out.end(), [](const EdgeSpec& x, const EdgeSpec& y) {
        return std::tie(x.src, x.dst, x.rel) < std::tie(y.src, y.dst, y.rel);
    });
    return out;
}

std::uint64_t HeteroGraph::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(n_nodes());
    for (std::size_t v = 0; v < n_nodes(); ++v)
        mix(static_cast<std::uint64_t>(kinds_[v]) | (static_cast<std::uint64_t>(author_[v]) << 8) |
            (static_cast<std::uint64_t>(static_cast<std::uint8_t>(label_[v])) << 16));
    for (const EdgeSpec& e : canonical_edges()) {
        mix(edge_key(e.src, e.dst));
        mix(static_cast<std::uint64_t>(e.rel));
    }
    return h;
}

void HeteroGraph::validate() const {
    // relation-kind consistency and symmetry
    for (int r = 0; r < kRelationCount; ++r) {
        for (std::size_t a = 0; a < adj_[r].size(); ++a) {
            for (NodeId b : adj_[r][a]) {
                const auto want = relation_for(kinds_[a], kinds_[b]);
                if (!want || *want != static_cast<Relation>(r))
                    throw std::runtime_error("validate: stored edge violates relation-kind rule");
                const auto& back = adj_[r][b];
                if (!std::binary_search(back.begin(), back.end(), static_cast<NodeId>(a)))
                    throw std::runtime_error("validate: edge not symmetric");
                if (static_cast<NodeId>(a) == b) throw std::runtime_error("validate: self-loop");
            }
        }
    }
    // component index vs fresh BFS labeling
    std::vector<NodeId> label(n_nodes(), -1);
    std::size_t comps = 0;
    std::vector<NodeId> stack;
    for (std::size_t s = 0; s < n_nodes(); ++s) {
        if (label[s] != -1) continue;
        ++comps;
        label[s] = static_cast<NodeId>(s);
        stack.assign(1, static_cast<NodeId>(s));
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : adj_all_[v])
                if (label[w] == -1) {
                    label[w] = static_cast<NodeId>(s);
                    stack.push_back(w);
                }
        }
    }
    if (comps != component_count_)
        throw std::runtime_error("validate: component count drifted from traversal");
    for (std::size_t v = 0; v < n_nodes(); ++v)
        if (find(label[v]) != find(static_cast<NodeId>(v)))
            throw std::runtime_error("validate: component index disagrees with traversal");
}

std::vector<NodeId> HeteroGraph::nodes_of_kind(NodeKind k) const {
    std::vector<NodeId> out;
    for (std::size_t v = 0; v < n_nodes(); ++v)
        if (kinds_[v] == k) out.push_back(static_cast<NodeId>(v));
    return out;
}

}  // namespace relab
