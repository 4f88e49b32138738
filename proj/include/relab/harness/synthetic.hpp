#pragma once

#include <cstdint>
#include <string>

#include "relab/harness/dataset.hpp"

namespace relab {

// Target shape of a generated dataset. Node-kind counts and component count
// are hit exactly; the edge count within 10%. Rumor labels are planted with
// structural correlation (bad authors post several messages, rumors attract
// more retweeters, non-rumors more comments) so a structure-only detector has
// learnable signal.
struct SyntheticSpec {
    std::string name = "synthetic";
    long rumors = 0;
    long nonrumors = 0;
    long authors = 0;
    long retweeters = 0;
    long comments = 0;
    long edges = 0;
    long components = 0;
    double bad_author_frac = 0.25;
    double label_author_bias = 0.85;  // P(rumor authored by a bad author)
    double split_ratio = 0.7;
    std::uint64_t seed = 1;

    long total_nodes() const { return rumors + nonrumors + authors + retweeters + comments; }
};

// Presets mirror published social-graph shapes; "weibo-mini" is the weibo
// preset at 1/10 scale.
SyntheticSpec synthetic_preset(const std::string& name, std::uint64_t seed = 1);

DatasetSpec generate_synthetic(const SyntheticSpec& spec);

struct DatasetStats {
    long nodes = 0, edges = 0, components = 0;
    long rumors = 0, nonrumors = 0, authors = 0, retweeters = 0, comments = 0;
};
DatasetStats dataset_stats(const DatasetSpec& spec);

}  // namespace relab
