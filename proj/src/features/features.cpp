#include "relab/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace relab {

namespace {

constexpr SlotDef kSubgraphSlots[] = {
    {"n_nodes", SlotNorm::Fit},
    {"n_edges", SlotNorm::Fit},
    {"clustering_coefficient", SlotNorm::Unit},
    {"avg_degree", SlotNorm::Fit},
    {"max_degree", SlotNorm::Fit},
    {"min_degree", SlotNorm::Fit},
    {"message_ratio", SlotNorm::Unit},
    {"author_ratio", SlotNorm::Unit},
    {"re_tweeter_ratio", SlotNorm::Unit},
    {"review_ratio", SlotNorm::Unit},
    {"bad_author_ratio", SlotNorm::Unit},
    {"rumor_ratio", SlotNorm::Unit},
    {"rumor_retweet_ratio", SlotNorm::Unit},
    {"rumor_review_ratio", SlotNorm::Unit},
    {"avg_author_inf", SlotNorm::Fit},
    {"max_author_inf", SlotNorm::Fit},
    {"min_author_inf", SlotNorm::Fit},
    {"avg_user_inf", SlotNorm::Fit},
    {"max_user_inf", SlotNorm::Fit},
    {"min_user_inf", SlotNorm::Fit},
    {"avg_rumor_inf", SlotNorm::Fit},
    {"max_rumor_inf", SlotNorm::Fit},
    {"min_rumor_inf", SlotNorm::Fit},
    {"avg_nonrumor_inf", SlotNorm::Fit},
    {"max_nonrumor_inf", SlotNorm::Fit},
    {"min_nonrumor_inf", SlotNorm::Fit},
    {"avg_target_suspicious", SlotNorm::Unit},
    {"max_target_suspicious", SlotNorm::Unit},
    {"min_target_suspicious", SlotNorm::Unit},
    {"attack_degree", SlotNorm::Unit},
    {"avg_rhm_suspicious", SlotNorm::Unit},
    {"max_rhm_suspicious", SlotNorm::Unit},
    {"min_rhm_suspicious", SlotNorm::Unit},
};

constexpr SlotDef kNodeSlots[] = {
    {"degree", SlotNorm::Fit},
    {"ego_n_edges", SlotNorm::Fit},
    {"good_bad", SlotNorm::Unit},
    {"node_type_rumor", SlotNorm::Unit},
    {"node_type_nonrumor", SlotNorm::Unit},
    {"node_type_good_author", SlotNorm::Unit},
    {"node_type_bad_author", SlotNorm::Unit},
    {"ego_rumor_ratio", SlotNorm::Unit},
    {"ego_bu_ratio", SlotNorm::Unit},
    {"ego_review_ratio", SlotNorm::Unit},
    {"node_inf", SlotNorm::Fit},
    {"ego_user_inf", SlotNorm::Fit},
    {"ego_message_inf", SlotNorm::Fit},
    {"avg_node_potential", SlotNorm::Unit},
    {"max_node_potential", SlotNorm::Unit},
    {"min_node_potential", SlotNorm::Unit},
    {"avg_neighbor_suspicious", SlotNorm::Unit},
    {"max_neighbor_suspicious", SlotNorm::Unit},
    {"min_neighbor_suspicious", SlotNorm::Unit},
    {"avg_node_attack_degree", SlotNorm::Unit},
    {"max_node_attack_degree", SlotNorm::Unit},
    {"min_node_attack_degree", SlotNorm::Unit},
    {"n_targets", SlotNorm::Fit},
    {"n_targets_distance", SlotNorm::Fit},
    {"avg_rhm_suspicious", SlotNorm::Unit},
    {"max_rhm_suspicious", SlotNorm::Unit},
    {"min_rhm_suspicious", SlotNorm::Unit},
};

// avg/max/min over a possibly-empty set; absent quantities impute to 0
struct StatAcc {
    double sum = 0.0, mx = 0.0, mn = 0.0;
    long n = 0;
    void add(double x) {
        if (n == 0) {
            mx = mn = x;
        } else {
            mx = std::max(mx, x);
            mn = std::min(mn, x);
        }
        sum += x;
        ++n;
    }
    double avg() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double max() const { return n ? mx : 0.0; }
    double min() const { return n ? mn : 0.0; }
    void emit(std::vector<double>& out) const {
        out.push_back(avg());
        out.push_back(max());
        out.push_back(min());
    }
};

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::span<const SlotDef> subgraph_schema() { return kSubgraphSlots; }
std::span<const SlotDef> node_schema() { return kNodeSlots; }

std::uint64_t schema_hash() {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    };
    mix("subgraph");
    for (const auto& s : kSubgraphSlots) {
        mix(s.name);
        mix(s.norm == SlotNorm::Unit ? "u" : "f");
    }
    mix("node");
    for (const auto& s : kNodeSlots) {
        mix(s.name);
        mix(s.norm == SlotNorm::Unit ? "u" : "f");
    }
    return h;
}

std::string schema_index_map_json() {
    nlohmann::json j;
    j["schema_hash"] = schema_hash();
    j["pair_layout"] = "x = h(source-of-target side) ++ h(controllable side)";
    auto emit = [](std::span<const SlotDef> slots) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < slots.size(); ++i)
            arr.push_back({{"index", i},
                           {"name", slots[i].name},
                           {"normalization", slots[i].norm == SlotNorm::Unit ? "unit" : "fit"}});
        return arr;
    };
    j["subgraph"] = emit(kSubgraphSlots);
    j["node"] = emit(kNodeSlots);
    return j.dump(2);
}

std::vector<double> subgraph_features_raw(const WorldView& w, NodeId component_root,
                                          std::span<const NodeId> component_nodes) {
    if (component_nodes.empty())
        throw std::invalid_argument("subgraph_features: empty component");
    const HeteroGraph& g = w.g;
    const GraphStats st = graph_stats(g, component_nodes);

    long n_msg = 0, n_author = 0, n_retweeter = 0, n_comment = 0;
    long n_bad_author = 0, n_rumor = 0, n_rumor_retweet = 0, n_rumor_review = 0;
    StatAcc author_inf, user_inf, rumor_inf, nonrumor_inf, target_susp, rhm_susp;

    const auto adjacent_to_rumor = [&](NodeId v) {
        for (NodeId u : g.neighbors(v))
            if (g.is_message(u) && g.rumor_label(u) == 1) return true;
        return false;
    };

    for (NodeId v : component_nodes) {
        switch (g.kind(v)) {
            case NodeKind::Message: {
                ++n_msg;
                const double inf = w.influence.message_score[v];
                if (g.rumor_label(v) == 1) {
                    ++n_rumor;
                    rumor_inf.add(inf);
                } else {
                    nonrumor_inf.add(inf);
                }
                if (w.is_target[v]) target_susp.add(w.snap.prob_of[v]);
                if (w.is_rhm[v]) rhm_susp.add(w.snap.prob_of[v]);
                break;
            }
            case NodeKind::User: {
                user_inf.add(w.influence.user_score[v]);
                if (g.is_author(v)) {
                    ++n_author;
                    author_inf.add(w.influence.user_score[v]);
                    if (w.bad_author[v]) ++n_bad_author;
                } else {
                    ++n_retweeter;
                    if (adjacent_to_rumor(v)) ++n_rumor_retweet;
                }
                break;
            }
            case NodeKind::Comment: {
                ++n_comment;
                if (adjacent_to_rumor(v)) ++n_rumor_review;
                break;
            }
        }
    }

    const auto n = static_cast<double>(component_nodes.size());
    const auto ratio = [](long a, long b) {
        return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
    };

    std::vector<double> f;
    f.reserve(std::size(kSubgraphSlots));
    f.push_back(static_cast<double>(st.n_nodes));
    f.push_back(static_cast<double>(st.n_edges));
    f.push_back(st.clustering);
    f.push_back(st.avg_degree);
    f.push_back(st.max_degree);
    f.push_back(st.min_degree);
    f.push_back(static_cast<double>(n_msg) / n);
    f.push_back(static_cast<double>(n_author) / n);
    f.push_back(static_cast<double>(n_retweeter) / n);
    f.push_back(static_cast<double>(n_comment) / n);
    f.push_back(ratio(n_bad_author, n_author));
    f.push_back(ratio(n_rumor, n_msg));
    f.push_back(ratio(n_rumor_retweet, n_retweeter));
    f.push_back(ratio(n_rumor_review, n_comment));
    author_inf.emit(f);
    user_inf.emit(f);
    rumor_inf.emit(f);
    nonrumor_inf.emit(f);
    target_susp.emit(f);
    f.push_back(static_cast<double>(w.counters.in_component(g, component_root)) /
                static_cast<double>(std::max(1, w.horizon)));
    rhm_susp.emit(f);
    return f;
}

std::vector<double> node_features_raw(const WorldView& w, NodeId v) {
    const HeteroGraph& g = w.g;
    if (!g.has_node(v)) throw std::invalid_argument("node_features: unknown node id");
    const Neighborhood nb = ego_and_khop(g, v, w.khop);

    long ego_rumor = 0, ego_bad_author = 0, ego_comment = 0;
    StatAcc ego_user_inf, ego_msg_inf;
    for (NodeId u : nb.ego) {
        if (g.is_message(u)) {
            ego_msg_inf.add(w.influence.message_score[u]);
            if (g.rumor_label(u) == 1) ++ego_rumor;
        } else if (g.is_user(u)) {
            ego_user_inf.add(w.influence.user_score[u]);
            if (w.bad_author[u]) ++ego_bad_author;
        } else {
            ++ego_comment;
        }
    }

    StatAcc potential, neighbor_susp, rhm_susp, node_attack;
    long n_targets = 0;
    double dist_sum = 0.0;
    for (std::size_t i = 0; i < nb.khop.size(); ++i) {
        const NodeId u = nb.khop[i];
        const int dist = nb.khop_dist[i];
        if (w.is_target[u]) {
            ++n_targets;
            dist_sum += dist;
            neighbor_susp.add(w.snap.prob_of[u]);
            if (dist <= 1) potential.add(w.snap.prob_of[u]);
        }
        if (w.is_rhm[u]) rhm_susp.add(w.snap.prob_of[u]);
    }
    const double horizon = static_cast<double>(std::max(1, w.horizon));
    for (NodeId u : nb.ego)
        node_attack.add(static_cast<double>(w.counters.per_node[u]) / horizon);

    const bool is_rumor = g.is_message(v) && g.rumor_label(v) == 1;
    const bool is_nonrumor = g.is_message(v) && g.rumor_label(v) != 1;
    const bool is_bad_author = g.is_user(v) && w.bad_author[v] != 0;
    const bool is_good_author = g.is_user(v) && g.is_author(v) && !is_bad_author;

    double node_inf = 0.0;
    if (g.is_user(v)) node_inf = w.influence.user_score[v];
    else if (g.is_message(v)) node_inf = w.influence.message_score[v];

    const auto ego_n = static_cast<double>(nb.ego.size());

    std::vector<double> f;
    f.reserve(std::size(kNodeSlots));
    f.push_back(static_cast<double>(g.degree(v)));
    f.push_back(static_cast<double>(nb.ego_edges));
    f.push_back((is_rumor || is_bad_author) ? 1.0 : 0.0);
    f.push_back(is_rumor ? 1.0 : 0.0);
    f.push_back(is_nonrumor ? 1.0 : 0.0);
    f.push_back(is_good_author ? 1.0 : 0.0);
    f.push_back(is_bad_author ? 1.0 : 0.0);
    f.push_back(static_cast<double>(ego_rumor) / ego_n);
    f.push_back(static_cast<double>(ego_bad_author) / ego_n);
    f.push_back(static_cast<double>(ego_comment) / ego_n);
    f.push_back(node_inf);
    f.push_back(ego_user_inf.avg());
    f.push_back(ego_msg_inf.avg());
    potential.emit(f);
    neighbor_susp.emit(f);
    node_attack.emit(f);
    f.push_back(static_cast<double>(n_targets));
    f.push_back(n_targets ? dist_sum / static_cast<double>(n_targets) : kNan);
    rhm_susp.emit(f);
    return f;
}

FeatureBounds FeatureBounds::fit(const WorldView& clean) {
    FeatureBounds b;
    const auto init = [](std::span<const SlotDef> slots, std::vector<double>& lo,
                         std::vector<double>& hi) {
        lo.assign(slots.size(), std::numeric_limits<double>::infinity());
        hi.assign(slots.size(), -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i].norm == SlotNorm::Unit) {
                lo[i] = 0.0;
                hi[i] = 1.0;
            }
    };
    init(kSubgraphSlots, b.g_lo_, b.g_hi_);
    init(kNodeSlots, b.n_lo_, b.n_hi_);

    const auto track = [](std::span<const SlotDef> slots, std::span<const double> raw,
                          std::vector<double>& lo, std::vector<double>& hi) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].norm != SlotNorm::Fit || std::isnan(raw[i])) continue;
            lo[i] = std::min(lo[i], raw[i]);
            hi[i] = std::max(hi[i], raw[i]);
        }
    };

    for (const auto& [root, members] : clean.g.components())
        track(kSubgraphSlots, subgraph_features_raw(clean, root, members), b.g_lo_, b.g_hi_);
    for (std::size_t v = 0; v < clean.g.n_nodes(); ++v)
        track(kNodeSlots, node_features_raw(clean, static_cast<NodeId>(v)), b.n_lo_, b.n_hi_);

    const auto finish = [](std::span<const SlotDef> slots, std::vector<double>& lo,
                           std::vector<double>& hi, std::vector<std::uint8_t>& constant) {
        constant.assign(slots.size(), 0);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
                lo[i] = 0.0;
                hi[i] = 0.0;
            }
            if (slots[i].norm == SlotNorm::Fit && lo[i] == hi[i]) constant[i] = 1;
        }
    };
    finish(kSubgraphSlots, b.g_lo_, b.g_hi_, b.g_constant_);
    finish(kNodeSlots, b.n_lo_, b.n_hi_, b.n_constant_);
    return b;
}

namespace {

std::vector<double> normalize_with(std::span<const SlotDef> slots, std::span<const double> raw,
                                   const std::vector<double>& lo, const std::vector<double>& hi,
                                   const std::vector<std::uint8_t>& constant) {
    if (raw.size() != slots.size())
        throw std::invalid_argument("feature normalization: schema size mismatch");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (std::isnan(raw[i])) {
            out[i] = 1.0;  // max-distance sentinel
        } else if (constant[i]) {
            out[i] = 0.0;
        } else {
            out[i] = std::clamp((raw[i] - lo[i]) / (hi[i] - lo[i]), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace

std::vector<double> FeatureBounds::normalize_subgraph(std::span<const double> raw) const {
    return normalize_with(kSubgraphSlots, raw, g_lo_, g_hi_, g_constant_);
}

std::vector<double> FeatureBounds::normalize_node(std::span<const double> raw) const {
    return normalize_with(kNodeSlots, raw, n_lo_, n_hi_, n_constant_);
}

double FeatureBounds::denormalize_subgraph(int slot, double y) const {
    if (g_constant_[slot]) return g_lo_[slot];
    return g_lo_[slot] + y * (g_hi_[slot] - g_lo_[slot]);
}

double FeatureBounds::denormalize_node(int slot, double y) const {
    if (n_constant_[slot]) return n_lo_[slot];
    return n_lo_[slot] + y * (n_hi_[slot] - n_lo_[slot]);
}

std::vector<double> subgraph_features(const WorldView& w, NodeId component_root,
                                      std::span<const NodeId> component_nodes,
                                      const FeatureBounds& bounds) {
    return bounds.normalize_subgraph(subgraph_features_raw(w, component_root, component_nodes));
}

std::vector<double> node_features(const WorldView& w, NodeId v, const FeatureBounds& bounds) {
    return bounds.normalize_node(node_features_raw(w, v));
}

std::vector<double> pair_vector(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pair_vector: schema mismatch between sides");
    std::vector<double> x;
    x.reserve(a.size() + b.size());
    x.insert(x.end(), a.begin(), a.end());
    x.insert(x.end(), b.begin(), b.end());
    return x;
}

}  // namespace relab
