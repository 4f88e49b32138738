#include "relab/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "relab/bandit/diagnostics.hpp"
#include "relab/env/episode.hpp"
#include "relab/env/rule_attack.hpp"
#include "relab/harness/reports.hpp"

namespace relab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct TraceWriter {
    std::ofstream out;
    explicit TraceWriter(const std::string& path) : out(path) {
        if (!out) throw std::runtime_error("cannot open trace log " + path);
    }
    void step(int episode, int t, const char* level, NodeId a, NodeId b, double delta,
              std::optional<double> r = {}, std::optional<double> r_tilde = {}) {
        json j{{"episode", episode}, {"t", t},         {"level", level},
               {"action", {a, b}},   {"delta", delta}};
        if (r) j["r"] = *r;
        if (r_tilde) j["r_tilde"] = *r_tilde;
        out << j.dump() << "\n";
    }
    void episode(int episode, double j0, double jT, bool truncated) {
        json j{{"episode", episode},
               {"summary", true},
               {"j0", j0},
               {"jT", jT},
               {"delta_total", j0 - jT},
               {"truncated", truncated}};
        out << j.dump() << "\n";
    }
};

int default_cutoff(std::size_t n_messages) {
    return std::max(1, static_cast<int>(std::ceil(0.1 * static_cast<double>(n_messages))));
}

TargetSet build_targets(const WorldInfo& world, const InfluenceTable& inf, int cutoff,
                        bool as_printed) {
    std::vector<double> weights;
    weights.reserve(world.targets.size());
    for (NodeId t : world.targets) weights.push_back(inf.message_score[t]);
    return make_target_set(world.targets, std::move(weights), cutoff, as_printed);
}

struct RuleSpec {
    RuleKind kind;
    bool has_variants;
};

std::optional<RuleSpec> rule_for_method(const std::string& m) {
    if (m == "random") return RuleSpec{RuleKind::Random, false};
    if (m == "random-plus") return RuleSpec{RuleKind::RandomPlus, true};
    if (m == "degree") return RuleSpec{RuleKind::Degree, true};
    if (m == "influence") return RuleSpec{RuleKind::Influence, true};
    if (m == "dcg") return RuleSpec{RuleKind::Dcg, true};
    return std::nullopt;
}

double mean_tail(const std::vector<double>& xs, int k) {
    if (xs.empty()) return 0.0;
    const std::size_t take = std::min<std::size_t>(k, xs.size());
    double s = 0.0;
    for (std::size_t i = xs.size() - take; i < xs.size(); ++i) s += xs[i];
    return s / static_cast<double>(take);
}

}  // namespace

double mean_over_seeds(const std::vector<MethodSeedResult>& rows, const std::string& method) {
    double s = 0.0;
    long n = 0;
    for (const auto& r : rows)
        if (r.method == method) {
            s += r.delta_ndcg;
            ++n;
        }
    if (n == 0) throw std::invalid_argument("no rows for method " + method);
    return s / static_cast<double>(n);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentResult result;

    fs::create_directories(cfg.out_dir);
    fs::create_directories(cfg.out_dir + "/traces");
    fs::create_directories(cfg.out_dir + "/policies");

    // ---- dataset
    DatasetSpec data;
    if (!cfg.dataset_path.empty()) {
        data = load_dataset(cfg.dataset_path);
    } else {
        SyntheticSpec synth =
            cfg.synthetic ? *cfg.synthetic : synthetic_preset("weibo-mini", cfg.root_seed);
        data = generate_synthetic(synth);
    }
    {
        Rng split_rng = Rng(cfg.root_seed).stream("split");
        ensure_split(data, cfg.split_ratio, split_rng);
    }
    const HeteroGraph g = build_graph(data);
    result.dataset_name = data.name;
    result.stats = dataset_stats(data);
    const LabeledSplit labels = split_labels(data);
    if (labels.train.empty()) throw std::runtime_error("experiment: no labeled train messages");

    const int cutoff = cfg.cutoff > 0
                           ? cfg.cutoff
                           : default_cutoff(g.nodes_of_kind(NodeKind::Message).size());

    // ---- clean-graph influence (z1/z2 frozen here for the whole run)
    const std::vector<double> clean_pr = pagerank(g);
    long z1 = 1, z2 = 1;
    fit_influence_scale(g, z1, z2);
    const InfluenceTable clean_inf = message_influence(g, clean_pr, z1, z2);

    // ---- detector: train once on the clean graph, then freeze
    std::optional<RgcnDetector> detector;
    if (!cfg.detector_checkpoint.empty()) {
        detector = load_detector(cfg.detector_checkpoint);
    } else {
        const NodeEncoder enc = NodeEncoder::fit(g);
        RgcnModel model(NodeEncoder::dim, cfg.detector.hidden_dim, cfg.detector.layers,
                        Rng(cfg.root_seed).stream("detector-init").next_u64());
        TrainConfig tc = cfg.detector;
        rgcn_train(model, g, enc.encode(g), labels.train, tc);
        detector.emplace(std::move(model), enc);
    }
    {
        // split-level metrics; targets = all split rumors, Eq-style weights
        auto split_targets = [&](const std::vector<MessageLabel>& ls) {
            std::vector<NodeId> ids;
            std::vector<double> ws;
            for (const auto& l : ls)
                if (l.is_rumor) {
                    ids.push_back(l.id);
                    ws.push_back(clean_inf.message_score[l.id]);
                }
            return make_target_set(std::move(ids), std::move(ws), cutoff,
                                   cfg.indicator_as_printed);
        };
        result.detector_train = rgcn_evaluate(detector->model(), g, detector->encoder(),
                                              labels.train, split_targets(labels.train));
        if (!labels.test.empty())
            result.detector_test = rgcn_evaluate(detector->model(), g, detector->encoder(),
                                                 labels.test, split_targets(labels.test));
        save_detector(*detector, cfg.out_dir + "/detector.json");
    }

    {
        std::ofstream schema(cfg.out_dir + "/feature_schema.json");
        schema << schema_index_map_json() << "\n";
    }

    // rule results per (method, variant, seed) for best-of-both aggregation
    std::map<std::string, std::map<std::string, std::vector<MethodSeedResult>>> rule_rows;

    for (const std::uint64_t seed : cfg.seeds) {
        const std::string seed_tag = "seed" + std::to_string(seed);
        Rng world_rng = Rng(cfg.root_seed).stream("controllable-sampling").stream(seed_tag);
        const WorldInfo world = sample_world(data, g, cfg.controllable_frac,
                                             cfg.rhm_all_messages,
                                             cfg.bad_author_targets_only, world_rng);
        const TargetSet targets =
            build_targets(world, clean_inf, cutoff, cfg.indicator_as_printed);
        AttackEnv env(g, *detector, world, targets,
                      EnvConfig{cfg.horizon, cfg.induced_l3, cfg.khop});
        const FeatureBounds bounds = FeatureBounds::fit(env.world_view());

        Rng calib_rng = Rng(cfg.root_seed).stream("calibration").stream(seed_tag);
        const CalibratedShapers shapers =
            calibrate_shapers(env, cfg.calibration_episodes, calib_rng);

        for (const std::string& method : cfg.methods) {
            if (method == "linucb") {
                TraceWriter trace(cfg.out_dir + "/traces/linucb-" + seed_tag + ".jsonl");
                LinUcbPolicy pg(2 * subgraph_dim(), cfg.alpha);
                LinUcbPolicy pn(2 * node_dim(), cfg.alpha);
                BaselineState baseline(cfg.baseline, cfg.horizon, cfg.baseline_ewma);
                Rng ep_rng = Rng(cfg.root_seed).stream("exploration").stream(seed_tag);

                MethodSeedResult row;
                row.method = "linucb";
                row.seed = seed;
                row.episodes = cfg.episodes;

                std::vector<std::vector<double>> reward_rows;  // full episodes only
                std::vector<std::pair<std::vector<double>, double>> samples_g, samples_n;
                std::vector<double> ep_tdrop, ep_rrise;  // per-episode step means

                for (int ep = 0; ep < cfg.episodes; ++ep) {
                    EpisodeDeps deps{bounds,      shapers.step, shapers.total, baseline,
                                     cfg.credit,  cfg.action_cap, true};
                    const EpisodeResult er = run_episode(env, pg, pn, deps, ep_rng);
                    row.curve.push_back(er.delta_total);
                    double td = 0.0, rr = 0.0;
                    for (const EpisodeStep& s : er.steps) {
                        trace.step(ep, s.t, "g", s.subgraph.gi, s.subgraph.gj, s.delta, s.r,
                                   s.r_tilde_g);
                        trace.step(ep, s.t, "n", s.node.vp, s.node.vq, s.delta, s.r,
                                   s.r_tilde_n);
                        td += static_cast<double>(s.tdrop);
                        rr += static_cast<double>(s.rrise);
                    }
                    trace.episode(ep, er.j0, er.jT, er.truncated);
                    if (!er.steps.empty()) {
                        ep_tdrop.push_back(td / static_cast<double>(er.steps.size()));
                        ep_rrise.push_back(rr / static_cast<double>(er.steps.size()));
                    }
                    if (static_cast<int>(er.steps.size()) == cfg.horizon) {
                        std::vector<double> rrow(cfg.horizon);
                        for (int t = 0; t < cfg.horizon; ++t) rrow[t] = er.steps[t].r;
                        reward_rows.push_back(std::move(rrow));
                    }
                    for (const EpisodeStep& s : er.steps) {
                        samples_g.emplace_back(s.xg, s.r_tilde_g);
                        samples_n.emplace_back(s.xn, s.r_tilde_n);
                    }
                }
                row.delta_ndcg = mean_tail(row.curve, cfg.report_last);
                row.notes = std::string("mean-last-") +
                            std::to_string(std::min<std::size_t>(cfg.report_last,
                                                                 row.curve.size())) +
                            ";baseline=" + to_string(cfg.baseline) +
                            ";credit=" + to_string(cfg.credit);
                result.rows.push_back(row);

                if (!reward_rows.empty()) {
                    Matrix R(reward_rows.size(), cfg.horizon);
                    for (std::size_t i = 0; i < reward_rows.size(); ++i)
                        std::copy(reward_rows[i].begin(), reward_rows[i].end(), R.row(i));
                    const VarianceCheck vc = variance_check(R);
                    VarianceRow vr;
                    vr.method = "linucb";
                    vr.seed = seed;
                    vr.full_episodes = static_cast<int>(reward_rows.size());
                    vr.horizon = cfg.horizon;
                    vr.sigma2 = vc.sigma2;
                    vr.sigma2_prime = vc.sigma2_prime;
                    vr.ok = vc.ok;
                    // mean squared residual of the final linear model (noise
                    // precision estimate), per level
                    const auto& kker = kernels::active();
                    auto residuals = [&kker](
                        const std::vector<std::pair<std::vector<double>, double>>& samples,
                        const LinUcbPolicy& p) {
                        std::vector<double> res;
                        res.reserve(samples.size());
                        for (const auto& [x, r] : samples)
                            res.push_back(r - kker.dot(x.data(), p.theta().data(), x.size()));
                        return res;
                    };
                    const auto rg = residuals(samples_g, pg);
                    const auto rn = residuals(samples_n, pn);
                    vr.beta_ml_g = rg.size() >= 2 ? inverse_beta_ml(rg) : 0.0;
                    vr.beta_ml_n = rn.size() >= 2 ? inverse_beta_ml(rn) : 0.0;
                    result.variance.push_back(vr);
                }
                {
                    RankMovementRow mr;
                    mr.method = "linucb";
                    mr.seed = seed;
                    double st = 0.0, sr = 0.0;
                    for (std::size_t i = 0; i < ep_tdrop.size(); ++i) {
                        st += ep_tdrop[i];
                        sr += ep_rrise[i];
                    }
                    const auto n = std::max<std::size_t>(1, ep_tdrop.size());
                    mr.mean_tdrop = st / static_cast<double>(n);
                    mr.mean_rrise = sr / static_cast<double>(n);
                    // best 100 episodes by delta total
                    std::vector<std::size_t> idx(row.curve.size());
                    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                        return row.curve[a] > row.curve[b];
                    });
                    double bt = 0.0, br = 0.0;
                    std::size_t taken = 0;
                    for (std::size_t i = 0; i < idx.size() && taken < 100; ++i) {
                        if (idx[i] >= ep_tdrop.size()) continue;
                        bt += ep_tdrop[idx[i]];
                        br += ep_rrise[idx[i]];
                        ++taken;
                    }
                    mr.best100_tdrop = taken ? bt / static_cast<double>(taken) : 0.0;
                    mr.best100_rrise = taken ? br / static_cast<double>(taken) : 0.0;
                    result.movement.push_back(mr);
                }

                std::ofstream pgf(cfg.out_dir + "/policies/linucb-" + seed_tag + "-subgraph.json");
                pgf << pg.to_json(schema_hash(), "subgraph") << "\n";
                std::ofstream pnf(cfg.out_dir + "/policies/linucb-" + seed_tag + "-node.json");
                pnf << pn.to_json(schema_hash(), "node") << "\n";
                continue;
            }

            const auto rule = rule_for_method(method);
            if (!rule)
                throw std::invalid_argument("experiment: unknown method '" + method + "'");
            const std::vector<RuleVariant> variants =
                rule->has_variants ? std::vector<RuleVariant>{RuleVariant::GuR, RuleVariant::BuN}
                                   : std::vector<RuleVariant>{RuleVariant::GuR};
            for (const RuleVariant variant : variants) {
                const std::string vname =
                    rule->has_variants ? method + "-" + to_string(variant) : method;
                TraceWriter trace(cfg.out_dir + "/traces/" + vname + "-" + seed_tag + ".jsonl");
                Rng rng = Rng(cfg.root_seed).stream(vname).stream(seed_tag);
                MethodSeedResult row;
                row.method = vname;
                row.seed = seed;
                row.episodes = cfg.rule_repetitions;
                row.notes = "mean-of-" + std::to_string(cfg.rule_repetitions) + "-reps";
                const RuleRunResult rr = run_rule_attack(
                    env, rule->kind, variant, cfg.rule_repetitions, rng,
                    [&](int ep, int t, const NodeAction& a, double d) {
                        trace.step(ep, t, "rule", a.vp, a.vq, d);
                    },
                    [&](int ep, double j0, double jT) { trace.episode(ep, j0, jT, false); });
                row.delta_ndcg = rr.mean_delta;
                row.curve = rr.per_episode;
                rule_rows[method][to_string(variant)].push_back(row);
            }
        }
    }

    // rule rows: per-variant rows plus a best-of-both alias named by the method
    for (auto& [method, by_variant] : rule_rows) {
        std::string best_variant;
        double best_mean = 0.0;
        for (auto& [variant, rows] : by_variant) {
            double mean = 0.0;
            for (const auto& r : rows) mean += r.delta_ndcg;
            mean /= static_cast<double>(rows.size());
            if (best_variant.empty() || mean > best_mean) {
                best_variant = variant;
                best_mean = mean;
            }
            if (by_variant.size() > 1)
                for (const auto& r : rows) result.rows.push_back(r);
        }
        for (MethodSeedResult r : by_variant[best_variant]) {
            r.notes += by_variant.size() > 1 ? ";best-of:" + best_variant : "";
            r.method = method;
            result.rows.push_back(r);
        }
    }

    std::sort(result.rows.begin(), result.rows.end(),
              [](const MethodSeedResult& a, const MethodSeedResult& b) {
                  return std::tie(a.method, a.seed) < std::tie(b.method, b.seed);
              });

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    write_reports(cfg, result);
    return result;
}

}  // namespace relab
