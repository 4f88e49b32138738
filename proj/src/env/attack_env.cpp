#include "relab/env/attack_env.hpp"

#include <algorithm>
#include <stdexcept>

namespace relab {

AttackEnv::AttackEnv(const HeteroGraph& clean, const DetectorOracle& oracle, WorldInfo world,
                     TargetSet targets, EnvConfig cfg)
    : clean_(clean),
      oracle_(oracle),
      world_(std::move(world)),
      targets_(std::move(targets)),
      cfg_(cfg),
      g_(clean) {
    if (world_.ctrl_users.empty())
        throw std::invalid_argument("attack env: no controllable users");
    if (world_.targets.empty())
        throw std::invalid_argument("attack env: no target rumors");
    clean_user_pr_ = pagerank(clean_);
    fit_influence_scale(clean_, z1_, z2_);  // frozen for the whole run
    reset();
}

void AttackEnv::refresh_components() {
    components_ = g_.components();
    comp_index_of_root_.assign(g_.n_nodes(), -1);
    for (std::size_t i = 0; i < components_.size(); ++i)
        comp_index_of_root_[components_[i].first] = static_cast<int>(i);
}

void AttackEnv::refresh_influence() {
    // Attack edges are L1-only by default, so the user projection and its
    // PageRank stay clean; induced L3 edges invalidate that shortcut.
    if (cfg_.induced_l3) {
        influence_ = message_influence(g_, pagerank(g_), z1_, z2_);
    } else {
        influence_ = message_influence(g_, clean_user_pr_, z1_, z2_);
    }
}

void AttackEnv::reset() {
    g_ = clean_;
    t_ = 0;
    counters_.reset(g_.n_nodes());
    refresh_influence();
    snap_ = oracle_.query(g_, 0);
    j_ = j0_ = ndcg(targets_, snap_);
    refresh_components();
}

std::span<const NodeId> AttackEnv::component_members(NodeId root) const {
    const int idx = comp_index_of_root_[root];
    if (idx < 0) throw std::invalid_argument("component_members: not a component root");
    return components_[idx].second;
}

std::vector<SubgraphAction> AttackEnv::subgraph_action_space() const {
    std::vector<NodeId> with_target, with_ctrl;
    for (const auto& [root, members] : components_) {
        bool has_target = false, has_ctrl = false;
        for (NodeId v : members) {
            has_target |= world_.is_target[v] != 0;
            has_ctrl |= world_.controllable[v] != 0;
            if (has_target && has_ctrl) break;
        }
        if (has_target) with_target.push_back(root);
        if (has_ctrl) with_ctrl.push_back(root);
    }
    if (with_target.empty())
        throw std::runtime_error("attack env: no component contains a target rumor");
    if (with_ctrl.empty())
        throw std::runtime_error("attack env: no component contains a controllable node");
    std::vector<SubgraphAction> out;
    out.reserve(with_target.size() * with_ctrl.size());
    for (NodeId gi : with_target)
        for (NodeId gj : with_ctrl) out.push_back({gi, gj});
    return out;
}

bool AttackEnv::admissible(NodeId a, NodeId b) const {
    NodeId user = a, msg = b;
    if (g_.is_message(user)) std::swap(user, msg);
    if (!g_.is_user(user) || !g_.is_message(msg)) return false;
    if (!world_.controllable[user] || !world_.controllable[msg]) return false;
    return !g_.has_edge(user, msg);
}

std::vector<NodeAction> AttackEnv::node_action_space(const SubgraphAction& chosen) const {
    const auto vi = component_members(chosen.gi);
    const auto vj = component_members(chosen.gj);
    std::vector<NodeId> users_i, msgs_i, users_j, msgs_j;
    const auto classify = [&](std::span<const NodeId> members, std::vector<NodeId>& users,
                              std::vector<NodeId>& msgs) {
        for (NodeId v : members) {
            if (!world_.controllable[v]) continue;
            if (g_.is_user(v)) users.push_back(v);
            else if (g_.is_message(v)) msgs.push_back(v);
        }
    };
    classify(vi, users_i, msgs_i);
    classify(vj, users_j, msgs_j);

    std::vector<NodeAction> out;
    for (NodeId u : users_i)
        for (NodeId m : msgs_j)
            if (!g_.has_edge(u, m)) out.push_back({u, m});
    for (NodeId m : msgs_i)
        for (NodeId u : users_j)
            if (!g_.has_edge(u, m)) out.push_back({m, u});
    return out;
}

double AttackEnv::step(const NodeAction& action) {
    if (t_ >= cfg_.horizon)
        throw std::runtime_error("attack env: horizon exhausted (T=" +
                                 std::to_string(cfg_.horizon) + ")");
    NodeId user = action.vp, msg = action.vq;
    if (g_.has_node(user) && g_.is_message(user)) std::swap(user, msg);
    if (!admissible(user, msg))
        throw std::runtime_error("attack env: action (" + std::to_string(action.vp) + "," +
                                 std::to_string(action.vq) + ") is not realizable");
    g_.add_attack_edge(user, msg, cfg_.induced_l3);
    counters_.record(user, msg);
    ++t_;
    refresh_influence();
    snap_ = oracle_.query(g_, t_);
    const double j_new = ndcg(targets_, snap_);
    const double delta = j_ - j_new;
    j_ = j_new;
    refresh_components();
    return delta;
}

}  // namespace relab
