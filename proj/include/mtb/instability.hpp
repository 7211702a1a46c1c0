#pragma once

#include <cstdint>
#include <vector>

#include "mtb/generators.hpp"
#include "mtb/matching.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb {

/// Split-tree leaf of every feature of an instability field, found by a
/// nearest-first bijection between feature centres and leaf positions; -1
/// when no leaf is left for a feature.
std::vector<int> feature_leaves(const InstabilityField& field, const MergeTree& tree);

struct InstabilityOutcome {
    std::uint64_t seed = 0;
    Method method = Method::ConstrainedEdit;
    int features = 0;
    int correct = 0;   // features whose leaf is matched to its counterpart
    bool expected() const noexcept { return correct == features; }
};

struct InstabilityPair {
    InstabilityField first;
    InstabilityField second;
};

/// Two independently perturbed copies of the three-peak field, drawn from
/// the streams (seed, 0) and (seed, 1).
InstabilityPair instability_pair(std::uint64_t seed, double amplitude = 0.01,
                                 std::int64_t grid_size = kInstabilityGridSize);

/// Matches the split trees of both fields (simplified at `simplify` of each
/// field's range) and counts features paired with their own counterpart.
InstabilityOutcome instability_trial(const InstabilityPair& pair, std::uint64_t seed, Method method,
                                     LookAhead la = {}, double simplify = 0.01);

} // namespace mtb
