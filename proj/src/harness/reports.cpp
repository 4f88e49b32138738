#include "relab/harness/reports.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "relab/features/features.hpp"

namespace relab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_reports(const ExperimentConfig& cfg, const ExperimentResult& result) {
    {
        auto out = open_out(cfg.out_dir + "/results.csv");
        out << "method,dataset,T,seed,delta_ndcg,delta_ndcg_x100,episodes,notes\n";
        for (const MethodSeedResult& r : result.rows)
            out << r.method << ',' << result.dataset_name << ',' << cfg.horizon << ',' << r.seed
                << ',' << fmt(r.delta_ndcg) << ',' << fmt_fixed(100.0 * r.delta_ndcg, 4) << ','
                << r.episodes << ',' << r.notes << "\n";
    }
    {
        auto out = open_out(cfg.out_dir + "/curves.csv");
        out << "method,seed,episode,delta_ndcg\n";
        for (const MethodSeedResult& r : result.rows)
            for (std::size_t e = 0; e < r.curve.size(); ++e)
                out << r.method << ',' << r.seed << ',' << e << ',' << fmt(r.curve[e]) << "\n";
    }
    {
        auto out = open_out(cfg.out_dir + "/variance.csv");
        out << "method,seed,full_episodes,T,sigma2,sigma2_prime,theorem_ok,beta_ml_inv_subgraph,"
               "beta_ml_inv_node\n";
        for (const VarianceRow& v : result.variance)
            out << v.method << ',' << v.seed << ',' << v.full_episodes << ',' << v.horizon << ','
                << fmt(v.sigma2) << ',' << fmt(v.sigma2_prime) << ',' << (v.ok ? 1 : 0) << ','
                << fmt(v.beta_ml_g) << ',' << fmt(v.beta_ml_n) << "\n";
    }
    {
        auto out = open_out(cfg.out_dir + "/tdrop_rrise.csv");
        out << "method,seed,mean_tdrop,mean_rrise,best100_tdrop,best100_rrise\n";
        for (const RankMovementRow& m : result.movement)
            out << m.method << ',' << m.seed << ',' << fmt(m.mean_tdrop) << ','
                << fmt(m.mean_rrise) << ',' << fmt(m.best100_tdrop) << ','
                << fmt(m.best100_rrise) << "\n";
    }
    {
        json meta;
        meta["dataset"] = result.dataset_name;
        meta["stats"] = {{"nodes", result.stats.nodes},
                         {"edges", result.stats.edges},
                         {"components", result.stats.components},
                         {"rumors", result.stats.rumors},
                         {"nonrumors", result.stats.nonrumors},
                         {"authors", result.stats.authors},
                         {"retweeters", result.stats.retweeters},
                         {"comments", result.stats.comments}};
        meta["detector"] = {{"train_accuracy", result.detector_train.accuracy},
                            {"train_recall", result.detector_train.recall},
                            {"train_ndcg", result.detector_train.ndcg},
                            {"test_accuracy", result.detector_test.accuracy},
                            {"test_recall", result.detector_test.recall},
                            {"test_ndcg", result.detector_test.ndcg}};
        meta["config"] = {{"horizon", cfg.horizon},
                          {"alpha", cfg.alpha},
                          {"episodes", cfg.episodes},
                          {"rule_repetitions", cfg.rule_repetitions},
                          {"baseline", to_string(cfg.baseline)},
                          {"baseline_ewma", cfg.baseline_ewma},
                          {"credit", to_string(cfg.credit)},
                          {"controllable_frac", cfg.controllable_frac},
                          {"cutoff", cfg.cutoff},
                          {"action_cap", cfg.action_cap},
                          {"root_seed", cfg.root_seed},
                          {"induced_l3", cfg.induced_l3},
                          {"indicator_as_printed", cfg.indicator_as_printed},
                          {"rhm_all_messages", cfg.rhm_all_messages}};
        meta["elapsed_seconds"] = result.elapsed_seconds;
        auto out = open_out(cfg.out_dir + "/meta.json");
        out << meta.dump(2) << "\n";
    }
}

namespace {

struct RankedSlot {
    std::string label;
    double weight;
};

void rank_level(const LinUcbPolicy& policy, std::span<const SlotDef> schema,
                const char* side_a, const char* side_b, std::vector<RankedSlot>& out) {
    const int d = static_cast<int>(schema.size());
    if (policy.dim() != 2 * d)
        throw std::runtime_error("feature importance: policy dimension does not match schema");
    for (int i = 0; i < policy.dim(); ++i) {
        const bool first = i < d;
        out.push_back({std::string(first ? side_a : side_b) + " " + schema[i % d].name,
                       policy.theta()[i]});
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedSlot& a, const RankedSlot& b) {
        return std::abs(a.weight) > std::abs(b.weight);
    });
}

}  // namespace

std::string feature_importance_report(const LinUcbPolicy& subgraph_policy,
                                      const LinUcbPolicy& node_policy, int top_k) {
    std::vector<RankedSlot> gs, ns;
    rank_level(subgraph_policy, subgraph_schema(), "G_i", "G_j", gs);
    rank_level(node_policy, node_schema(), "v_p", "v_q", ns);

    std::ostringstream out;
    out << "Feature importance (|LinUCB weight|, signed weights shown)\n\n";
    out << "Subgraph Level (top " << top_k << ")\n";
    for (int i = 0; i < top_k && i < static_cast<int>(gs.size()); ++i) {
        char line[128];
        std::snprintf(line, sizeof line, "%3d. %-34s % .6f\n", i + 1, gs[i].label.c_str(),
                      gs[i].weight);
        out << line;
    }
    out << "\nNode Level (top " << top_k << ")\n";
    for (int i = 0; i < top_k && i < static_cast<int>(ns.size()); ++i) {
        char line[128];
        std::snprintf(line, sizeof line, "%3d. %-34s % .6f\n", top_k + i + 1,
                      ns[i].label.c_str(), ns[i].weight);
        out << line;
    }
    out << "\nAll slots\n";
    const auto emit_all = [&out](const std::vector<RankedSlot>& slots, const char* level) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            char line[160];
            std::snprintf(line, sizeof line, "%-8s %3zu. %-34s % .6f\n", level, i + 1,
                          slots[i].label.c_str(), slots[i].weight);
            out << line;
        }
    };
    emit_all(gs, "subgraph");
    emit_all(ns, "node");
    return out.str();
}

std::string feature_importance_from_files(const std::string& subgraph_path,
                                          const std::string& node_path, int top_k) {
    const auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open policy checkpoint " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const LinUcbPolicy pg = LinUcbPolicy::from_json(read(subgraph_path), schema_hash());
    const LinUcbPolicy pn = LinUcbPolicy::from_json(read(node_path), schema_hash());
    return feature_importance_report(pg, pn, top_k);
}

TraceCheck verify_traces(const std::string& out_dir, double tol) {
    TraceCheck check;
    const fs::path dir = fs::path(out_dir) / "traces";
    if (!fs::exists(dir)) throw std::runtime_error("no trace directory under " + out_dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
        std::ifstream in(f);
        std::string line;
        std::map<int, double> delta_sum;
        std::map<int, std::pair<double, double>> summaries;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            const int ep = j.at("episode").get<int>();
            if (j.value("summary", false)) {
                summaries[ep] = {j.at("j0").get<double>(), j.at("jT").get<double>()};
            } else if (j.at("level").get<std::string>() != "n") {
                // one delta per step: count level-g (or rule) records only
                delta_sum[ep] += j.at("delta").get<double>();
            }
        }
        for (const auto& [ep, jj] : summaries) {
            const double err = std::abs(delta_sum[ep] - (jj.first - jj.second));
            check.max_telescoping_error = std::max(check.max_telescoping_error, err);
            if (err > tol)
                throw std::runtime_error("telescoping violation in " + f.string() +
                                         " episode " + std::to_string(ep) + ": |sum - (J0-JT)| = " +
                                         fmt(err));
            ++check.episodes;
        }
    }
    return check;
}

std::string summarize_results(const std::string& out_dir) {
    std::ifstream in(out_dir + "/results.csv");
    if (!in) throw std::runtime_error("cannot open " + out_dir + "/results.csv");
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, std::pair<double, long>> agg;
    std::string dataset;
    int horizon = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string method, ds, t, seed, delta;
        std::getline(ss, method, ',');
        std::getline(ss, ds, ',');
        std::getline(ss, t, ',');
        std::getline(ss, seed, ',');
        std::getline(ss, delta, ',');
        dataset = ds;
        horizon = std::stoi(t);
        auto& [sum, n] = agg[method];
        sum += std::stod(delta);
        ++n;
    }
    std::ostringstream out;
    out << "dataset=" << dataset << " T=" << horizon << "\n";
    out << "method                 mean dNDCG (x1e-2)   runs\n";
    for (const auto& [method, sn] : agg) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-22s %18.4f %6ld\n", method.c_str(),
                      100.0 * sn.first / static_cast<double>(sn.second), sn.second);
        out << buf;
    }
    return out.str();
}

}  // namespace relab
