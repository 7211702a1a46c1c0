#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtb/grid_field.hpp"

namespace mtb {

/// Join: sublevel sets, leaves are minima, root is the global maximum.
/// Split: superlevel sets, leaves are maxima, root is the global minimum.
enum class SweepDirection { Join, Split };

enum class NodeType { Leaf, Saddle, Root };

const char* to_string(SweepDirection d);
const char* to_string(NodeType t);
SweepDirection parse_direction(const std::string& s);

struct MergeTreeNode {
    std::int64_t vertex = 0;
    double scalar = 0.0;
    NodeType type = NodeType::Leaf;
};

/// Merge tree with nodes stored in sweep order: node i is visited before
/// node j by the sublevel (Join) or superlevel (Split) sweep iff i < j.
/// Hence every parent has a larger index than its children and the root is
/// the last node. Ties in scalar value are broken by vertex index.
class MergeTree {
public:
    MergeTree() = default;

    /// Builds a tree from nodes and a parent array (-1 marks the root).
    /// Node types are derived from the structure. The input order is
    /// arbitrary; nodes are re-sorted into sweep order. Throws
    /// std::invalid_argument if the result is not a valid merge tree.
    MergeTree(std::vector<MergeTreeNode> nodes, std::vector<int> parent, SweepDirection direction);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    SweepDirection direction() const noexcept { return direction_; }
    const MergeTreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<MergeTreeNode>& nodes() const noexcept { return nodes_; }
    int parent(int i) const { return parent_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& parents() const noexcept { return parent_; }
    const std::vector<int>& children(int i) const { return children_[static_cast<std::size_t>(i)]; }
    int root() const noexcept { return size() - 1; }
    bool is_leaf(int i) const { return children(i).empty(); }
    std::vector<int> leaves() const;

    double scalar(int i) const { return node(i).scalar; }
    std::int64_t vertex(int i) const { return node(i).vertex; }

    /// True if a is a (non-strict) ancestor of b.
    bool is_ancestor(int a, int b) const;
    int depth(int i) const { return depth_[static_cast<std::size_t>(i)]; }

    /// Scalar extent covered by the tree, |f(root) - f(most extreme leaf)|.
    double scalar_range() const;

    bool operator==(const MergeTree& other) const;

private:
    std::vector<MergeTreeNode> nodes_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> depth_;
    SweepDirection direction_ = SweepDirection::Join;
};

/// True if (a, ia) is visited before (b, ib) by the sweep in direction d.
inline bool sweep_before(SweepDirection d, double a, std::int64_t ia, double b, std::int64_t ib) noexcept
{
    return d == SweepDirection::Join ? sos_less(a, ia, b, ib) : sos_less(b, ib, a, ia);
}

/// Union-find sweep over the vertices of `field` in sweep order.
MergeTree compute_merge_tree(const GridField& field, SweepDirection direction);

struct PersistencePair {
    int leaf = 0;
    int partner = 0;          // saddle where the leaf's component dies, or the root
    double persistence = 0.0;
};

/// Elder-rule pairing. Returned in leaf order; the most extreme leaf is
/// paired with the root.
std::vector<PersistencePair> persistence_pairs(const MergeTree& tree);

/// For every node, the leaf whose branch owns the arc from the node to its
/// parent (the oldest leaf in its subtree). The root maps to the global leaf.
std::vector<int> owning_leaves(const MergeTree& tree);

/// Removes leaf branches of persistence < threshold_fraction * data_range in
/// increasing order of persistence, contracting saddles left with a single
/// child. The most persistent leaf is never removed.
MergeTree simplify(const MergeTree& tree, double threshold_fraction, double data_range);

/// Merges each saddle into its parent when their scalar difference is below
/// epsilon * data_range, processing saddles bottom-up. The parent may be the
/// root only when the root itself joins two or more components.
MergeTree epsilon_process(const MergeTree& tree, double epsilon, double data_range);

struct CriticalTypeCounts {
    int leaves = 0;
    int saddles = 0;
};

/// Leaves and saddles; the root is counted in neither.
CriticalTypeCounts critical_type_counts(const MergeTree& tree);

// ---- branch decomposition -------------------------------------------------

struct Branch {
    int leaf = 0;
    int top = 0;                 // node where the branch terminates (saddle or root)
    double persistence = 0.0;
    int parent = -1;             // index of the parent branch, -1 for the root branch
    std::vector<int> path;       // nodes from leaf up to top, inclusive
    std::vector<int> children;   // child branches, ordered by attachment from the leaf upwards
};

struct BranchDecompositionTree {
    std::vector<Branch> branches;  // ordered by leaf sweep order; root branch first
    int root_branch = 0;
};

/// Elder-rule (persistence-based) branch decomposition.
BranchDecompositionTree branch_decomposition(const MergeTree& tree);

// ---- Morse cells ----------------------------------------------------------

struct MorseCellMap {
    std::vector<std::int64_t> assignment;  // vertex -> extremum vertex
    SweepDirection direction = SweepDirection::Split;
};

/// Steepest ascent (Split) or descent (Join) along Freudenthal neighbours;
/// ties resolved by vertex index.
MorseCellMap morse_cells(const GridField& field, SweepDirection direction);

// ---- serialization --------------------------------------------------------

/// JSON with "direction", "nodes":[{vertex,scalar,type}] and "parent"
/// (parent[i] is the index of node i's parent, -1 for the root). Nodes are
/// ordered ascending by (scalar, vertex).
std::string tree_to_json(const MergeTree& tree);
MergeTree tree_from_json(const std::string& text);

} // namespace mtb
