#include "relab/harness/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace relab {

SyntheticSpec synthetic_preset(const std::string& name, std::uint64_t seed) {
    SyntheticSpec s;
    s.seed = seed;
    double scale = 1.0;
    std::string base = name;
    if (const auto pos = name.rfind("-mini"); pos != std::string::npos && pos + 5 == name.size()) {
        base = name.substr(0, pos);
        scale = 0.1;
    }
    const auto scaled = [scale](long x) { return std::max(0L, std::lround(scale * static_cast<double>(x))); };
    if (base == "weibo") {
        s.rumors = scaled(1538);
        s.nonrumors = scaled(1849);
        s.authors = scaled(2440);
        s.retweeters = scaled(4415);
        s.comments = scaled(38);
        s.edges = scaled(16412);
        s.components = scaled(2392);
    } else if (base == "pheme") {
        s.rumors = scaled(1972);
        s.nonrumors = scaled(3830);
        s.authors = scaled(2837);
        s.retweeters = scaled(1496);
        s.comments = scaled(1815);
        s.edges = scaled(14737);
        s.components = scaled(2450);
    } else {
        throw std::invalid_argument("unknown synthetic preset: " + name);
    }
    s.name = name;
    return s;
}

namespace {

// weighted pick, weights >= 0 with positive sum
std::size_t weighted_pick(const std::vector<double>& w, double total, Rng& rng) {
    double x = rng.uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        x -= w[i];
        if (x <= 0.0) return i;
    }
    return w.size() - 1;
}

}  // namespace

DatasetSpec generate_synthetic(const SyntheticSpec& spec) {
    const long n_msg = spec.rumors + spec.nonrumors;
    if (spec.total_nodes() <= 0) throw std::invalid_argument("synthetic: empty node budget");
    if (spec.components < 1) throw std::invalid_argument("synthetic: need >= 1 component");
    if (spec.authors < spec.components)
        throw std::invalid_argument("synthetic: need at least one author per component (" +
                                    std::to_string(spec.authors) + " authors < " +
                                    std::to_string(spec.components) + " components)");
    if (n_msg < 1) throw std::invalid_argument("synthetic: need >= 1 message");
    const long min_edges = spec.total_nodes() - spec.components;
    if (spec.edges < min_edges)
        throw std::invalid_argument("synthetic: infeasible edge target " +
                                    std::to_string(spec.edges) + " < nodes - components = " +
                                    std::to_string(min_edges));

    Rng rng = Rng(spec.seed).stream("generator");

    // --- authors across components (preferential sizes for realistic skew)
    std::vector<int> author_comp(spec.authors);
    std::vector<double> comp_weight(spec.components, 1.0);
    double comp_total = static_cast<double>(spec.components);
    for (long a = 0; a < spec.components; ++a) author_comp[a] = static_cast<int>(a);
    for (long a = spec.components; a < spec.authors; ++a) {
        const auto c = weighted_pick(comp_weight, comp_total, rng);
        author_comp[a] = static_cast<int>(c);
        comp_weight[c] += 1.0;
        comp_total += 1.0;
    }

    std::vector<std::uint8_t> author_bad(spec.authors, 0);
    {
        std::vector<long> order(spec.authors);
        for (long a = 0; a < spec.authors; ++a) order[a] = a;
        rng.shuffle(order);
        const auto n_bad = std::lround(spec.bad_author_frac * static_cast<double>(spec.authors));
        for (long i = 0; i < n_bad && i < spec.authors; ++i) author_bad[order[i]] = 1;
    }
    std::vector<long> bad_authors, good_authors;
    for (long a = 0; a < spec.authors; ++a)
        (author_bad[a] ? bad_authors : good_authors).push_back(a);

    // --- messages to authors, label correlated with author badness
    std::vector<long> msg_author(n_msg);
    std::vector<std::uint8_t> msg_rumor(n_msg, 0);
    for (long m = 0; m < n_msg; ++m) {
        const bool rumor = m < spec.rumors;
        msg_rumor[m] = rumor ? 1 : 0;
        const bool prefer_bad = rumor ? rng.chance(spec.label_author_bias)
                                      : !rng.chance(spec.label_author_bias);
        const auto& pool = (prefer_bad && !bad_authors.empty())   ? bad_authors
                           : (!prefer_bad && !good_authors.empty()) ? good_authors
                           : (bad_authors.empty() ? good_authors : bad_authors);
        msg_author[m] = pool[rng.uniform_int(pool.size())];
    }

    // --- retweeters prefer rumors, comments prefer non-rumors
    std::vector<double> rt_weight(n_msg), cm_weight(n_msg);
    double rt_total = 0.0, cm_total = 0.0;
    for (long m = 0; m < n_msg; ++m) {
        rt_weight[m] = msg_rumor[m] ? 3.0 : 1.0;
        cm_weight[m] = msg_rumor[m] ? 1.0 : 3.0;
        rt_total += rt_weight[m];
        cm_total += cm_weight[m];
    }
    std::vector<long> retweeter_msg(spec.retweeters), comment_msg(spec.comments);
    for (long r = 0; r < spec.retweeters; ++r)
        retweeter_msg[r] = static_cast<long>(weighted_pick(rt_weight, rt_total, rng));
    for (long c = 0; c < spec.comments; ++c)
        comment_msg[c] = static_cast<long>(weighted_pick(cm_weight, cm_total, rng));

    // --- node ids: authors, messages, retweeters, comments
    DatasetSpec out;
    out.name = spec.name;
    const auto author_id = [](long a) { return static_cast<NodeId>(a); };
    const auto msg_id = [&](long m) { return static_cast<NodeId>(spec.authors + m); };
    const auto rt_id = [&](long r) { return static_cast<NodeId>(spec.authors + n_msg + r); };
    const auto cm_id = [&](long c) {
        return static_cast<NodeId>(spec.authors + n_msg + spec.retweeters + c);
    };
    for (long a = 0; a < spec.authors; ++a)
        out.nodes.push_back({author_id(a), NodeKind::User, true, -1});
    for (long m = 0; m < n_msg; ++m)
        out.nodes.push_back({msg_id(m), NodeKind::Message, false, msg_rumor[m] ? 1 : 0});
    for (long r = 0; r < spec.retweeters; ++r)
        out.nodes.push_back({rt_id(r), NodeKind::User, false, -1});
    for (long c = 0; c < spec.comments; ++c)
        out.nodes.push_back({cm_id(c), NodeKind::Comment, false, -1});

    std::set<std::pair<NodeId, NodeId>> edge_set;
    long n_edges = 0;
    const auto add_edge = [&](NodeId a, NodeId b, Relation rel) {
        if (a == b) return false;
        auto key = std::minmax(a, b);
        if (!edge_set.insert(key).second) return false;
        out.edges.push_back({a, b, rel});
        ++n_edges;
        return true;
    };

    // spanning structure: extra authors link into their component seed author
    for (long a = spec.components; a < spec.authors; ++a)
        add_edge(author_id(a), author_id(author_comp[a]), Relation::L3);
    for (long m = 0; m < n_msg; ++m) add_edge(msg_id(m), author_id(msg_author[m]), Relation::L1);
    for (long r = 0; r < spec.retweeters; ++r)
        add_edge(rt_id(r), msg_id(retweeter_msg[r]), Relation::L1);
    for (long c = 0; c < spec.comments; ++c)
        add_edge(cm_id(c), msg_id(comment_msg[c]), Relation::L2);

    // re-post social ties, kept only while the edge budget allows
    {
        std::vector<long> order(spec.retweeters);
        for (long r = 0; r < spec.retweeters; ++r) order[r] = r;
        rng.shuffle(order);
        for (long r : order) {
            if (n_edges >= spec.edges) break;
            add_edge(rt_id(r), author_id(msg_author[retweeter_msg[r]]), Relation::L3);
        }
    }

    // densify inside components: co-retweet ties and second re-posts
    std::vector<std::vector<long>> msgs_of_comp(spec.components);
    std::vector<std::vector<long>> retweeters_of_msg(n_msg);
    for (long m = 0; m < n_msg; ++m) msgs_of_comp[author_comp[msg_author[m]]].push_back(m);
    for (long r = 0; r < spec.retweeters; ++r) retweeters_of_msg[retweeter_msg[r]].push_back(r);

    long attempts = 40 * (spec.edges - n_edges) + 100;
    while (n_edges < spec.edges && attempts-- > 0) {
        if (rng.chance(0.5) && spec.retweeters > 0) {
            // co-retweet: two retweeters of one message
            const long m = static_cast<long>(weighted_pick(rt_weight, rt_total, rng));
            const auto& rs = retweeters_of_msg[m];
            if (rs.size() < 2) continue;
            const long r1 = rs[rng.uniform_int(rs.size())];
            const long r2 = rs[rng.uniform_int(rs.size())];
            if (r1 != r2) add_edge(rt_id(r1), rt_id(r2), Relation::L3);
        } else if (spec.retweeters > 0) {
            // second re-post of another message in the same component
            const long r = static_cast<long>(rng.uniform_int(spec.retweeters));
            const auto& msgs = msgs_of_comp[author_comp[msg_author[retweeter_msg[r]]]];
            const long m2 = msgs[rng.uniform_int(msgs.size())];
            if (add_edge(rt_id(r), msg_id(m2), Relation::L1)) {
                retweeters_of_msg[m2].push_back(r);
                if (n_edges < spec.edges)
                    add_edge(rt_id(r), author_id(msg_author[m2]), Relation::L3);
            }
        } else {
            // no retweeters at all: link authors within a component
            const long a = static_cast<long>(rng.uniform_int(spec.authors));
            const auto& msgs = msgs_of_comp[author_comp[a]];
            if (msgs.empty()) continue;
            add_edge(author_id(a), author_id(msg_author[msgs[rng.uniform_int(msgs.size())]]),
                     Relation::L3);
        }
    }

    const double edge_err = std::abs(static_cast<double>(n_edges - spec.edges)) /
                            std::max(1.0, static_cast<double>(spec.edges));
    if (edge_err > 0.10)
        throw std::runtime_error("synthetic: could not reach edge target within 10% (got " +
                                 std::to_string(n_edges) + ", want " +
                                 std::to_string(spec.edges) + ")");

    Rng split_rng = Rng(spec.seed).stream("generator-split");
    ensure_split(out, spec.split_ratio, split_rng);
    return out;
}

DatasetStats dataset_stats(const DatasetSpec& spec) {
    DatasetStats s;
    s.nodes = static_cast<long>(spec.nodes.size());
    s.edges = static_cast<long>(spec.edges.size());
    for (const NodeSpec& n : spec.nodes) {
        switch (n.kind) {
            case NodeKind::Message:
                if (n.label == 1) ++s.rumors;
                else ++s.nonrumors;
                break;
            case NodeKind::User:
                if (n.is_author) ++s.authors;
                else ++s.retweeters;
                break;
            case NodeKind::Comment: ++s.comments; break;
        }
    }
    s.components = static_cast<long>(build_graph(spec).component_count());
    return s;
}

}  // namespace relab
