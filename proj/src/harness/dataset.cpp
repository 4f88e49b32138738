#include "relab/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace relab {

namespace {

using nlohmann::json;

NodeKind kind_from_string(const std::string& s, std::size_t record) {
    if (s == "message") return NodeKind::Message;
    if (s == "user") return NodeKind::User;
    if (s == "comment") return NodeKind::Comment;
    throw std::runtime_error("dataset: node #" + std::to_string(record) +
                             " field 'kind': unknown value '" + s + "'");
}

Relation rel_from_string(const std::string& s, std::size_t record) {
    if (s == "l1") return Relation::L1;
    if (s == "l2") return Relation::L2;
    if (s == "l3") return Relation::L3;
    throw std::runtime_error("dataset: edge #" + std::to_string(record) +
                             " field 'rel': unknown value '" + s + "'");
}

}  // namespace

DatasetSpec load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("dataset: parse failure in " + path + ": " + e.what());
    }
    DatasetSpec spec;
    spec.name = j.value("name", "unnamed");
    if (!j.contains("nodes") || j["nodes"].empty())
        throw std::runtime_error("dataset: no nodes");
    for (std::size_t i = 0; i < j["nodes"].size(); ++i) {
        const json& n = j["nodes"][i];
        NodeSpec ns;
        if (!n.contains("id"))
            throw std::runtime_error("dataset: node #" + std::to_string(i) + " missing 'id'");
        ns.id = n["id"].get<NodeId>();
        ns.kind = kind_from_string(n.value("kind", ""), i);
        ns.is_author = n.value("author", false);
        if (n.contains("label")) {
            if (ns.kind != NodeKind::Message)
                throw std::runtime_error("dataset: node #" + std::to_string(i) +
                                         " field 'label': labels are message-only");
            const std::string l = n["label"].get<std::string>();
            if (l == "rumor") ns.label = 1;
            else if (l == "nonrumor") ns.label = 0;
            else
                throw std::runtime_error("dataset: node #" + std::to_string(i) +
                                         " field 'label': unknown value '" + l + "'");
        }
        spec.nodes.push_back(ns);
    }
    for (std::size_t i = 0; j.contains("edges") && i < j["edges"].size(); ++i) {
        const json& e = j["edges"][i];
        if (!e.contains("src") || !e.contains("dst"))
            throw std::runtime_error("dataset: edge #" + std::to_string(i) +
                                     " missing 'src'/'dst'");
        spec.edges.push_back(
            {e["src"].get<NodeId>(), e["dst"].get<NodeId>(), rel_from_string(e.value("rel", ""), i)});
    }
    if (j.contains("split")) {
        spec.train = j["split"].value("train", std::vector<NodeId>{});
        spec.test = j["split"].value("test", std::vector<NodeId>{});
    }
    return spec;
}

void save_dataset(const DatasetSpec& spec, const std::string& path) {
    json j;
    j["format"] = "relab-dataset";
    j["version"] = 1;
    j["name"] = spec.name;
    json nodes = json::array();
    for (const NodeSpec& n : spec.nodes) {
        json jn{{"id", n.id}, {"kind", to_string(n.kind)}};
        if (n.kind == NodeKind::User && n.is_author) jn["author"] = true;
        if (n.kind == NodeKind::Message && n.label >= 0)
            jn["label"] = n.label == 1 ? "rumor" : "nonrumor";
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const EdgeSpec& e : spec.edges)
        edges.push_back({{"src", e.src}, {"dst", e.dst}, {"rel", to_string(e.rel)}});
    j["edges"] = std::move(edges);
    j["split"] = {{"train", spec.train}, {"test", spec.test}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dataset: cannot write " + path);
    out << j.dump() << "\n";
}

HeteroGraph build_graph(const DatasetSpec& spec) {
    if (spec.nodes.empty()) throw std::invalid_argument("dataset: no nodes");
    return HeteroGraph::build(spec.nodes, spec.edges);
}

LabeledSplit split_labels(const DatasetSpec& spec) {
    std::vector<std::int8_t> label(spec.nodes.size(), -1);
    for (const NodeSpec& n : spec.nodes)
        if (n.kind == NodeKind::Message) label[n.id] = static_cast<std::int8_t>(n.label);
    LabeledSplit out;
    for (NodeId id : spec.train)
        if (label[id] >= 0) out.train.push_back({id, label[id]});
    for (NodeId id : spec.test)
        if (label[id] >= 0) out.test.push_back({id, label[id]});
    return out;
}

void ensure_split(DatasetSpec& spec, double train_ratio, Rng& rng) {
    if (!spec.train.empty() || !spec.test.empty()) {
        std::unordered_set<NodeId> seen;
        for (NodeId id : spec.train)
            if (!seen.insert(id).second)
                throw std::runtime_error("dataset: split lists overlap or repeat id " +
                                         std::to_string(id));
        for (NodeId id : spec.test)
            if (!seen.insert(id).second)
                throw std::runtime_error("dataset: split lists overlap or repeat id " +
                                         std::to_string(id));
        return;
    }
    std::vector<NodeId> messages;
    for (const NodeSpec& n : spec.nodes)
        if (n.kind == NodeKind::Message) messages.push_back(n.id);
    std::sort(messages.begin(), messages.end());
    rng.shuffle(messages);
    const auto cut = static_cast<std::size_t>(train_ratio * static_cast<double>(messages.size()));
    spec.train.assign(messages.begin(), messages.begin() + cut);
    spec.test.assign(messages.begin() + cut, messages.end());
    std::sort(spec.train.begin(), spec.train.end());
    std::sort(spec.test.begin(), spec.test.end());
}

WorldInfo sample_world(const DatasetSpec& spec, const HeteroGraph& g, double controllable_frac,
                       bool rhm_all_messages, bool bad_author_targets_only, Rng& rng) {
    WorldInfo w;
    const std::size_t n = g.n_nodes();
    w.controllable.assign(n, 0);
    w.is_target.assign(n, 0);
    w.bad_author.assign(n, 0);
    w.is_rhm.assign(n, 0);

    std::vector<NodeId> authors;
    for (std::size_t v = 0; v < n; ++v)
        if (g.is_user(static_cast<NodeId>(v)) && g.is_author(static_cast<NodeId>(v)))
            authors.push_back(static_cast<NodeId>(v));
    if (authors.empty()) throw std::runtime_error("sample_world: dataset has no authors");

    rng.shuffle(authors);
    const auto take = std::max<std::size_t>(
        1, static_cast<std::size_t>(controllable_frac * static_cast<double>(authors.size())));
    std::vector<NodeId> picked(authors.begin(), authors.begin() + std::min(take, authors.size()));
    std::sort(picked.begin(), picked.end());

    // controllable = sampled authors plus every message they authored (their
    // clean-graph L1 neighborhood)
    for (NodeId a : picked) {
        w.controllable[a] = 1;
        w.ctrl_users.push_back(a);
        for (NodeId m : g.neighbors(a, Relation::L1))
            if (!w.controllable[m]) {
                w.controllable[m] = 1;
                w.ctrl_messages.push_back(m);
            }
    }
    std::sort(w.ctrl_messages.begin(), w.ctrl_messages.end());

    std::vector<std::uint8_t> in_train(n, 0);
    for (NodeId id : spec.train) in_train[id] = 1;

    // targets: rumor-labeled controllable train messages
    for (NodeId m : w.ctrl_messages)
        if (in_train[m] && g.rumor_label(m) == 1) {
            w.is_target[m] = 1;
            w.targets.push_back(m);
        }
    if (w.targets.empty())
        throw std::runtime_error(
            "sample_world: no target rumors in the controllable sample; increase the "
            "controllable fraction or use a larger dataset");

    // RHM set: non-target rumors by default, every non-target message when
    // the broader reading is requested
    for (std::size_t v = 0; v < n; ++v) {
        const auto m = static_cast<NodeId>(v);
        if (!g.is_message(m) || w.is_target[m]) continue;
        if (rhm_all_messages || g.rumor_label(m) == 1) w.is_rhm[m] = 1;
    }

    // bad author: authored >=1 rumor (or >=1 target rumor under the narrow
    // flag) on the clean graph, frozen
    for (NodeId a : authors) {
        for (NodeId m : g.neighbors(a, Relation::L1)) {
            const bool rumor = g.rumor_label(m) == 1;
            const bool counts = bad_author_targets_only ? (rumor && w.is_target[m]) : rumor;
            if (counts) {
                w.bad_author[a] = 1;
                break;
            }
        }
    }

    // controllable authors of target rumors (BU-N attach side)
    std::unordered_set<NodeId> seen;
    for (NodeId m : w.targets) {
        for (NodeId u : g.neighbors(m, Relation::L1))
            if (g.is_author(u) && w.controllable[u]) {
                if (seen.insert(u).second) w.target_authors.push_back(u);
                break;  // lowest-id author is the author of record
            }
    }
    std::sort(w.target_authors.begin(), w.target_authors.end());
    return w;
}

}  // namespace relab
