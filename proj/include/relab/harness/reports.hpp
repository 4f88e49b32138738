#pragma once

#include <string>

#include "relab/bandit/linucb.hpp"
#include "relab/harness/experiment.hpp"

namespace relab {

// Emits results.csv, curves.csv, variance.csv, tdrop_rrise.csv and meta.json
// into cfg.out_dir. Rows are pre-sorted; doubles print with round-trip
// precision so identical runs are byte-identical.
void write_reports(const ExperimentConfig& cfg, const ExperimentResult& result);

// Ranked feature-importance table from the two level policies: every schema
// slot with its signed weight, plus the top-k per level by |weight|.
std::string feature_importance_report(const LinUcbPolicy& subgraph_policy,
                                      const LinUcbPolicy& node_policy, int top_k = 8);

// Loads a policy checkpoint pair and renders the report; throws on schema
// hash mismatch.
std::string feature_importance_from_files(const std::string& subgraph_path,
                                          const std::string& node_path, int top_k = 8);

struct TraceCheck {
    int episodes = 0;
    double max_telescoping_error = 0.0;
};

// Replays every trace log under out_dir/traces: per episode, the sum of step
// deltas must telescope to j0 - jT. Throws if any episode violates tol.
TraceCheck verify_traces(const std::string& out_dir, double tol = 1e-12);

// Human-readable summary of results.csv (means over seeds, x100 display).
std::string summarize_results(const std::string& out_dir);

}  // namespace relab
