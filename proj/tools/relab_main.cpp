// relab command-line interface: synthetic data generation, detector training,
// attack experiments and reporting.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime fault.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relab/harness/experiment.hpp"
#include "relab/harness/reports.hpp"
#include "relab/kernels/kernels.hpp"

namespace {

using namespace relab;

int cmd_gen(const std::string& preset, long nodes_override, long components_override,
            double rumor_ratio, std::uint64_t seed, const std::string& out_path) {
    SyntheticSpec spec = synthetic_preset(preset, seed);
    if (nodes_override > 0) {
        // rescale every category to the requested node budget
        const double f = static_cast<double>(nodes_override) /
                         static_cast<double>(spec.total_nodes());
        spec.rumors = std::lround(f * spec.rumors);
        spec.nonrumors = std::lround(f * spec.nonrumors);
        spec.authors = std::max(1L, std::lround(f * spec.authors));
        spec.retweeters = std::lround(f * spec.retweeters);
        spec.comments = std::lround(f * spec.comments);
        spec.edges = std::lround(f * spec.edges);
        spec.components = std::max(1L, std::lround(f * spec.components));
    }
    if (components_override > 0) spec.components = components_override;
    if (rumor_ratio >= 0.0) {
        const long msgs = spec.rumors + spec.nonrumors;
        spec.rumors = std::lround(rumor_ratio * static_cast<double>(msgs));
        spec.nonrumors = msgs - spec.rumors;
    }
    spec.seed = seed;
    const DatasetSpec data = generate_synthetic(spec);
    save_dataset(data, out_path);
    const DatasetStats st = dataset_stats(data);
    std::printf("wrote %s: %ld nodes, %ld edges, %ld components "
                "(%ld rumors, %ld non-rumors, %ld authors, %ld retweeters, %ld comments)\n",
                out_path.c_str(), st.nodes, st.edges, st.components, st.rumors, st.nonrumors,
                st.authors, st.retweeters, st.comments);
    return 0;
}

int cmd_train_detector(const std::string& data_path, const TrainConfig& tc,
                       const std::string& out_path, std::uint64_t seed) {
    DatasetSpec data = load_dataset(data_path);
    Rng split_rng = Rng(seed).stream("split");
    ensure_split(data, 0.7, split_rng);
    const HeteroGraph g = build_graph(data);
    const DatasetStats st = dataset_stats(data);
    std::printf("dataset %s: %ld nodes, %ld edges, %ld components\n", data.name.c_str(),
                st.nodes, st.edges, st.components);
    const LabeledSplit labels = split_labels(data);

    const NodeEncoder enc = NodeEncoder::fit(g);
    TrainConfig cfg = tc;
    cfg.seed = Rng(seed).stream("detector-init").next_u64();
    RgcnModel model(NodeEncoder::dim, cfg.hidden_dim, cfg.layers, cfg.seed);
    const auto history = rgcn_train(model, g, enc.encode(g), labels.train, cfg);

    const std::vector<double> pr = pagerank(g);
    long z1 = 1, z2 = 1;
    fit_influence_scale(g, z1, z2);
    const InfluenceTable inf = message_influence(g, pr, z1, z2);
    const int cutoff = std::max(
        1, static_cast<int>(std::ceil(0.1 * g.nodes_of_kind(NodeKind::Message).size())));
    auto targets_of = [&](const std::vector<MessageLabel>& ls) {
        std::vector<NodeId> ids;
        std::vector<double> ws;
        for (const auto& l : ls)
            if (l.is_rumor) {
                ids.push_back(l.id);
                ws.push_back(inf.message_score[l.id]);
            }
        return make_target_set(std::move(ids), std::move(ws), cutoff);
    };
    const EvalMetrics train = rgcn_evaluate(model, g, enc, labels.train, targets_of(labels.train));
    std::printf("train: loss %.4f -> %.4f | accuracy %.4f recall %.4f NDCG %.4f\n",
                history.front(), history.back(), train.accuracy, train.recall, train.ndcg);
    if (!labels.test.empty()) {
        const EvalMetrics test = rgcn_evaluate(model, g, enc, labels.test, targets_of(labels.test));
        std::printf("test:  accuracy %.4f recall %.4f NDCG %.4f\n", test.accuracy, test.recall,
                    test.ndcg);
    }
    save_detector(RgcnDetector(std::move(model), enc), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relab: graph rumor-detector evasion laboratory"};
    app.require_subcommand(1);

    // ---- gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic social-graph dataset");
    std::string gen_preset = "weibo-mini", gen_out = "dataset.json";
    long gen_nodes = 0, gen_components = 0;
    double gen_rumor_ratio = -1.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--preset", gen_preset, "preset: weibo, weibo-mini, pheme, pheme-mini");
    gen->add_option("--nodes", gen_nodes, "override the node budget");
    gen->add_option("--components", gen_components, "override the component count");
    gen->add_option("--rumor-ratio", gen_rumor_ratio, "override the rumor share of messages");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--out", gen_out, "output dataset path");

    // ---- train-detector
    auto* train = app.add_subcommand("train-detector", "train the R-GCN detector");
    std::string tr_data, tr_out = "detector.json";
    TrainConfig tr_cfg;
    std::uint64_t tr_seed = 42;
    train->add_option("--data", tr_data, "dataset path")->required();
    train->add_option("--epochs", tr_cfg.epochs, "training epochs");
    train->add_option("--lr", tr_cfg.learning_rate, "learning rate");
    train->add_option("--hidden-dim", tr_cfg.hidden_dim, "hidden dimension");
    train->add_option("--layers", tr_cfg.layers, "hidden layer count");
    train->add_option("--seed", tr_seed, "root seed");
    train->add_option("-o,--out", tr_out, "checkpoint output path");

    // ---- attack
    auto* attack = app.add_subcommand("attack", "run attack experiments");
    ExperimentConfig cfg;
    std::string atk_preset;
    std::string baseline = "time", credit = "step-wise";
    attack->add_option("--data", cfg.dataset_path, "dataset path (omit to use --preset)");
    attack->add_option("--preset", atk_preset, "synthetic preset when no --data given");
    attack->add_option("--out-dir", cfg.out_dir, "output directory");
    attack->add_option("--method", cfg.methods,
                       "methods: linucb random random-plus degree influence dcg");
    attack->add_option("--seeds", cfg.seeds, "experiment seeds");
    attack->add_option("-T,--horizon", cfg.horizon, "attack steps per episode");
    attack->add_option("--alpha", cfg.alpha, "LinUCB exploration coefficient");
    attack->add_option("--episodes", cfg.episodes, "learned-attacker episodes");
    attack->add_option("--rule-reps", cfg.rule_repetitions, "rule-attacker repetitions");
    attack->add_option("--report-last", cfg.report_last, "average the last K episodes");
    attack->add_option("--baseline", baseline, "time|constant|graph|function|none");
    attack->add_option("--baseline-ewma", cfg.baseline_ewma,
                       "exponentially-weighted V(t) rate (0 = exact mean)");
    attack->add_option("--credit", credit, "step-wise|delayed");
    attack->add_option("--controllable-frac", cfg.controllable_frac, "author sample fraction");
    attack->add_option("--cutoff", cfg.cutoff, "NDCG cutoff m (0 = 10% of messages)");
    attack->add_option("--action-cap", cfg.action_cap, "candidate subsample cap");
    attack->add_option("--detector", cfg.detector_checkpoint, "detector checkpoint to load");
    attack->add_option("--epochs", cfg.detector.epochs, "detector epochs when training here");
    attack->add_option("--root-seed", cfg.root_seed, "root seed");
    attack->add_flag("--induced-l3", cfg.induced_l3, "attack edges induce re-post L3 ties");
    attack->add_flag("--indicator-as-printed", cfg.indicator_as_printed,
                     "use the literal rank>m truncation");
    attack->add_flag("--rhm-all-messages", cfg.rhm_all_messages,
                     "RHM = all non-target messages");
    attack->add_flag("--bad-author-targets-only", cfg.bad_author_targets_only,
                     "bad author = authored a target rumor");

    // ---- report
    auto* report = app.add_subcommand("report", "summarize and validate an experiment");
    std::string rep_dir = "out";
    report->add_option("--out-dir", rep_dir, "experiment directory");

    // ---- feature-importance
    auto* fi = app.add_subcommand("feature-importance", "rank policy weights by |value|");
    std::string fi_g, fi_n;
    int fi_top = 8;
    fi->add_option("--subgraph-policy", fi_g, "subgraph-level checkpoint")->required();
    fi->add_option("--node-policy", fi_n, "node-level checkpoint")->required();
    fi->add_option("--top", fi_top, "entries per level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_preset, gen_nodes, gen_components, gen_rumor_ratio, gen_seed,
                           gen_out);
        if (train->parsed()) return cmd_train_detector(tr_data, tr_cfg, tr_out, tr_seed);
        if (attack->parsed()) {
            cfg.baseline = baseline_mode_from_string(baseline);
            cfg.credit = credit_mode_from_string(credit);
            if (cfg.dataset_path.empty())
                cfg.synthetic = synthetic_preset(atk_preset.empty() ? "weibo-mini" : atk_preset,
                                                 cfg.root_seed);
            std::printf("kernels: %s\n", kernels::active().name);
            const ExperimentResult res = run_experiment(cfg);
            std::printf("%s", summarize_results(cfg.out_dir).c_str());
            std::printf("elapsed: %.1fs; outputs under %s\n", res.elapsed_seconds,
                        cfg.out_dir.c_str());
            return 0;
        }
        if (report->parsed()) {
            const TraceCheck tc = verify_traces(rep_dir);
            std::printf("%s", summarize_results(rep_dir).c_str());
            std::printf("traces: %d episodes replayed, max telescoping error %.3g\n",
                        tc.episodes, tc.max_telescoping_error);
            return 0;
        }
        if (fi->parsed()) {
            std::printf("%s", feature_importance_from_files(fi_g, fi_n, fi_top).c_str());
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
