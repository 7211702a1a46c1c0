#include "mtb/labeled_tree.hpp"

#include <stdexcept>

namespace mtb {

bool LabeledTree::is_ancestor(int a, int b) const
{
    for (int x = b; x != -1; x = parent[static_cast<std::size_t>(x)]) {
        if (x == a)
            return true;
    }
    return false;
}

std::vector<int> LabeledTree::postorder() const
{
    std::vector<int> out;
    out.reserve(parent.size());
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        const auto& ch = children[static_cast<std::size_t>(node)];
        if (next < ch.size()) {
            const int c = ch[next++];
            stack.push_back({c, 0});
        } else {
            out.push_back(node);
            stack.pop_back();
        }
    }
    return out;
}

LabeledTree LabeledTree::from_parents(std::vector<int> parent, std::vector<Interval> label, std::vector<std::int64_t> id)
{
    const int n = static_cast<int>(parent.size());
    if (n == 0 || label.size() != parent.size() || id.size() != parent.size())
        throw std::invalid_argument("labeled tree arrays must be non-empty and of equal length");
    LabeledTree t;
    t.children.assign(static_cast<std::size_t>(n), {});
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const int p = parent[static_cast<std::size_t>(i)];
        if (p < -1 || p >= n || p == i)
            throw std::invalid_argument("labeled tree parent index out of range");
        if (p == -1) {
            t.root = i;
            ++roots;
        } else {
            t.children[static_cast<std::size_t>(p)].push_back(i);
        }
    }
    if (roots != 1)
        throw std::invalid_argument("labeled tree must have exactly one root");
    t.parent = std::move(parent);
    t.label = std::move(label);
    t.id = std::move(id);
    if (static_cast<int>(t.postorder().size()) != n)
        throw std::invalid_argument("labeled tree parent array contains a cycle");
    return t;
}

LabeledTree node_labeled_tree(const MergeTree& tree)
{
    const auto oldest = owning_leaves(tree);
    std::vector<int> partner(static_cast<std::size_t>(tree.size()), -1);
    for (const auto& p : persistence_pairs(tree))
        partner[static_cast<std::size_t>(p.leaf)] = p.partner;

    LabeledTree t;
    t.parent = tree.parents();
    t.children.resize(static_cast<std::size_t>(tree.size()));
    t.root = tree.root();
    for (int i = 0; i < tree.size(); ++i) {
        t.children[static_cast<std::size_t>(i)] = tree.children(i);
        const int leaf = oldest[static_cast<std::size_t>(i)];
        if (i == tree.root())
            t.label.push_back({0.0, 0.0});
        else
            t.label.push_back({tree.scalar(leaf), tree.scalar(partner[static_cast<std::size_t>(leaf)])});
        t.id.push_back(tree.vertex(i));
    }
    return t;
}

LabeledTree branch_labeled_tree(const MergeTree& tree, const BranchDecompositionTree& bdt)
{
    std::vector<int> parent;
    std::vector<Interval> label;
    std::vector<std::int64_t> id;
    for (const auto& b : bdt.branches) {
        parent.push_back(b.parent);
        label.push_back({tree.scalar(b.leaf), tree.scalar(b.top)});
        id.push_back(tree.vertex(b.leaf));
    }
    return LabeledTree::from_parents(std::move(parent), std::move(label), std::move(id));
}

} // namespace mtb
