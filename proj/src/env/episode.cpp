#include "relab/env/episode.hpp"

#include <algorithm>
#include <map>

namespace relab {

namespace {

// Deterministic uniform subsample of k indices out of n, ascending.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_int(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

template <typename T>
bool cap_candidates(std::vector<T>& v, std::size_t cap, Rng& rng) {
    if (v.size() <= cap) return false;
    const auto keep = sample_indices(v.size(), cap, rng);
    std::vector<T> out;
    out.reserve(cap);
    for (std::size_t i : keep) out.push_back(std::move(v[i]));
    v = std::move(out);
    return true;
}

}  // namespace

EpisodeResult run_episode(AttackEnv& env, LinUcbPolicy& policy_g, LinUcbPolicy& policy_n,
                          EpisodeDeps& deps, Rng& rng) {
    env.reset();
    EpisodeResult out;
    out.j0 = env.j();

    std::vector<std::vector<double>> xs_g, xs_n;
    std::vector<double> deltas;
    std::vector<long> keys_g, keys_n;

    for (int t = 1; t <= env.horizon(); ++t) {
        const WorldView view = env.world_view();

        auto a1 = env.subgraph_action_space();
        out.a1_capped |= cap_candidates(a1, static_cast<std::size_t>(deps.action_cap), rng);

        // subgraph features per distinct component root in A1
        std::map<NodeId, std::vector<double>> comp_feat;
        for (const auto& a : a1) {
            for (NodeId root : {a.gi, a.gj})
                if (!comp_feat.count(root))
                    comp_feat[root] = subgraph_features(view, root, env.component_members(root),
                                                        deps.bounds);
        }
        std::vector<std::vector<double>> cand_g;
        cand_g.reserve(a1.size());
        for (const auto& a : a1) cand_g.push_back(pair_vector(comp_feat[a.gi], comp_feat[a.gj]));

        // select a subgraph pair whose node-level space is nonempty; empty
        // pairs are masked and the policy re-selects among the rest
        std::vector<NodeAction> a2;
        SubgraphAction chosen_pair;
        std::vector<double> chosen_xg;
        while (!a1.empty()) {
            const int gi = policy_g.select(cand_g);
            a2 = env.node_action_space(a1[gi]);
            if (!a2.empty()) {
                chosen_pair = a1[gi];
                chosen_xg = cand_g[gi];
                break;
            }
            a1.erase(a1.begin() + gi);
            cand_g.erase(cand_g.begin() + gi);
        }
        if (a2.empty()) {  // saturated: every pair exhausted
            out.truncated = true;
            break;
        }
        out.a2_capped |= cap_candidates(a2, static_cast<std::size_t>(deps.action_cap), rng);

        std::map<NodeId, std::vector<double>> node_feat;
        for (const auto& a : a2)
            for (NodeId v : {a.vp, a.vq})
                if (!node_feat.count(v)) node_feat[v] = node_features(view, v, deps.bounds);
        std::vector<std::vector<double>> cand_n;
        cand_n.reserve(a2.size());
        for (const auto& a : a2) cand_n.push_back(pair_vector(node_feat[a.vp], node_feat[a.vq]));

        const int ni = policy_n.select(cand_n);
        const NodeAction action = a2[ni];

        // bucket keys for the attack-degree baseline, taken before the step
        const long key_g = env.counters().in_component(env.graph(), chosen_pair.gi) +
                           (chosen_pair.gj != chosen_pair.gi
                                ? env.counters().in_component(env.graph(), chosen_pair.gj)
                                : 0);
        const long key_n =
            env.counters().per_node[action.vp] + env.counters().per_node[action.vq];

        // scope of TDrop/RRise: the selected component pair, pre-step
        std::vector<NodeId> scope(env.component_members(chosen_pair.gi).begin(),
                                  env.component_members(chosen_pair.gi).end());
        if (chosen_pair.gj != chosen_pair.gi)
            scope.insert(scope.end(), env.component_members(chosen_pair.gj).begin(),
                         env.component_members(chosen_pair.gj).end());
        const RankingSnapshot before = env.snapshot();

        const double delta = env.step(action);
        const RankMovement rm =
            tdrop_rrise(before, env.snapshot(), env.target_set(), env.world().targets, scope);

        EpisodeStep step;
        step.t = t;
        step.subgraph = chosen_pair;
        step.node = action;
        step.xg = std::move(chosen_xg);
        step.xn = cand_n[ni];
        step.delta = delta;
        step.tdrop = rm.tdrop;
        step.rrise = rm.rrise;
        out.steps.push_back(std::move(step));
        deltas.push_back(delta);
        keys_g.push_back(key_g);
        keys_n.push_back(key_n);
        xs_g.push_back(out.steps.back().xg);
        xs_n.push_back(out.steps.back().xn);
    }

    out.jT = env.j();
    for (double d : deltas) out.delta_total += d;

    // rewards: step-wise credit shapes each delta; delayed credit assigns the
    // normalized episode total to every step
    std::vector<double> rs(out.steps.size());
    if (deps.credit == CreditMode::StepWise) {
        for (std::size_t i = 0; i < rs.size(); ++i) rs[i] = deps.step_shaper.shape(deltas[i]);
    } else {
        const double r = deps.total_shaper.shape(out.delta_total);
        std::fill(rs.begin(), rs.end(), r);
    }

    std::vector<double> rt_g(out.steps.size()), rt_n(out.steps.size());
    for (std::size_t i = 0; i < out.steps.size(); ++i) {
        const int t = out.steps[i].t;
        rt_g[i] = deps.baseline.adjust(0, t, keys_g[i], xs_g[i], rs[i]);
        rt_n[i] = deps.baseline.adjust(1, t, keys_n[i], xs_n[i], rs[i]);
        deps.baseline.record_shared(t, rs[i]);
        deps.baseline.record_level(0, keys_g[i], rs[i]);
        deps.baseline.record_level(1, keys_n[i], rs[i]);
        out.steps[i].r = rs[i];
        out.steps[i].r_tilde_g = rt_g[i];
        out.steps[i].r_tilde_n = rt_n[i];
    }
    deps.baseline.finish_episode(0, xs_g, rs);
    deps.baseline.finish_episode(1, xs_n, rs);

    if (deps.update_policies && !out.steps.empty()) {
        policy_g.update_episode(xs_g, rt_g);
        policy_n.update_episode(xs_n, rt_n);
    }
    return out;
}

}  // namespace relab
