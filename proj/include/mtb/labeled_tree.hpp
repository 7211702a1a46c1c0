#pragma once

#include <cstdint>
#include <vector>

#include "mtb/merge_tree.hpp"

namespace mtb {

/// (birth, death) of a persistence interval.
struct Interval {
    double birth = 0.0;
    double death = 0.0;
    bool operator==(const Interval&) const = default;
};

/// Rooted unordered tree with interval labels, the common input of the
/// edit-distance matchers and the brute-force oracle.
struct LabeledTree {
    std::vector<int> parent;                 // -1 for the root
    std::vector<std::vector<int>> children;
    std::vector<Interval> label;
    std::vector<std::int64_t> id;            // identifier used for tie-breaking
    int root = 0;

    int size() const noexcept { return static_cast<int>(parent.size()); }
    bool is_leaf(int i) const { return children[static_cast<std::size_t>(i)].empty(); }
    /// True if a is a (non-strict) ancestor of b.
    bool is_ancestor(int a, int b) const;
    /// Children before parents.
    std::vector<int> postorder() const;

    /// Throws std::invalid_argument unless `parent` describes a single rooted tree.
    static LabeledTree from_parents(std::vector<int> parent, std::vector<Interval> label, std::vector<std::int64_t> id);
};

/// Node tree of a merge tree: node i carries the interval of the branch that
/// owns the arc above it. The root has no arc and carries the constant label
/// (0, 0), so the forced root pair is free. Indices match the merge tree's
/// node indices; ids are vertex indices.
LabeledTree node_labeled_tree(const MergeTree& tree);

/// Branch decomposition tree: node b is branch b, labelled
/// (f(leaf), f(top)), with the leaf vertex as id.
LabeledTree branch_labeled_tree(const MergeTree& tree, const BranchDecompositionTree& bdt);

} // namespace mtb
