#pragma once

#include <cstdint>
#include <vector>

#include "mtb/merge_tree.hpp"

namespace fixture {

struct NodeSpec {
    std::int64_t vertex;
    double scalar;
    int parent;  // index into the spec list, -1 for the root
};

mtb::MergeTree build_tree(const std::vector<NodeSpec>& spec, mtb::SweepDirection dir);

/// Two split trees whose leaves A=1 and B=2 swap the higher value, so the
/// elder-rule branch decompositions disagree.
mtb::MergeTree vertical_first();
mtb::MergeTree vertical_second();

/// Two split trees with leaves A=1, B=2, C=3 whose saddles E=4 and F=5 swap
/// order, regrouping the leaves.
mtb::MergeTree horizontal_first();
mtb::MergeTree horizontal_second();

} // namespace fixture
