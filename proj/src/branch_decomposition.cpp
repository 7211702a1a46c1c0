#include <algorithm>

#include "mtb/merge_tree.hpp"

namespace mtb {

BranchDecompositionTree branch_decomposition(const MergeTree& tree)
{
    const auto oldest = owning_leaves(tree);
    const auto pairs = persistence_pairs(tree);

    BranchDecompositionTree bdt;
    std::vector<int> branch_of_leaf(static_cast<std::size_t>(tree.size()), -1);
    for (const auto& p : pairs) {
        Branch b;
        b.leaf = p.leaf;
        b.top = p.partner;
        b.persistence = p.persistence;
        for (int x = p.leaf;; x = tree.parent(x)) {
            b.path.push_back(x);
            if (x == p.partner)
                break;
        }
        branch_of_leaf[static_cast<std::size_t>(p.leaf)] = static_cast<int>(bdt.branches.size());
        bdt.branches.push_back(std::move(b));
    }

    const int global = oldest[static_cast<std::size_t>(tree.root())];
    bdt.root_branch = branch_of_leaf[static_cast<std::size_t>(global)];
    for (std::size_t i = 0; i < bdt.branches.size(); ++i) {
        auto& b = bdt.branches[i];
        if (b.leaf == global)
            continue;
        b.parent = branch_of_leaf[static_cast<std::size_t>(oldest[static_cast<std::size_t>(b.top)])];
        bdt.branches[static_cast<std::size_t>(b.parent)].children.push_back(static_cast<int>(i));
    }
    // Children attach along the parent path, which is in sweep order.
    for (auto& b : bdt.branches) {
        std::sort(b.children.begin(), b.children.end(), [&](int x, int y) {
            const int tx = bdt.branches[static_cast<std::size_t>(x)].top;
            const int ty = bdt.branches[static_cast<std::size_t>(y)].top;
            return tx != ty ? tx < ty : x < y;
        });
    }
    return bdt;
}

} // namespace mtb
