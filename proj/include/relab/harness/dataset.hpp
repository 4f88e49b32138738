#pragma once

#include <string>
#include <vector>

#include "relab/core/rng.hpp"
#include "relab/env/attack_env.hpp"
#include "relab/graph/graph.hpp"

namespace relab {

// One self-contained dataset document: node records, edge records and the
// train/test message split, stored as a single JSON file so relational
// integrity lives in one artifact.
struct DatasetSpec {
    std::string name;
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    std::vector<NodeId> train, test;
};

// Parses and validates; schema violations name the record index and field.
DatasetSpec load_dataset(const std::string& path);
void save_dataset(const DatasetSpec& spec, const std::string& path);

HeteroGraph build_graph(const DatasetSpec& spec);

struct LabeledSplit {
    std::vector<MessageLabel> train, test;
};
LabeledSplit split_labels(const DatasetSpec& spec);

// Message-level 7:3 split (when the spec carries none) and the controllable
// sample: a fraction of authors plus the messages they authored on the clean
// graph; targets are the rumor-labeled controllable train messages. Throws
// when the draw yields zero targets.
WorldInfo sample_world(const DatasetSpec& spec, const HeteroGraph& g, double controllable_frac,
                       bool rhm_all_messages, bool bad_author_targets_only, Rng& rng);

// Ensures spec.train/test exist; fills them 7:3 over messages when absent.
void ensure_split(DatasetSpec& spec, double train_ratio, Rng& rng);

}  // namespace relab
