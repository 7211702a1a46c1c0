#include <algorithm>

#include "matching_detail.hpp"
#include "mtb/assignment.hpp"

namespace mtb {
namespace {

class BranchTreeEdit {
public:
    BranchTreeEdit(const LabeledTree& b1, const LabeledTree& b2, const CostModel& model)
        : b1_(b1), b2_(b2), model_(model), n2_(b2.size()), tree_(static_cast<std::size_t>(b1.size() * b2.size()))
    {
        tdel_ = subtree_costs(b1, true);
        tins_ = subtree_costs(b2, false);
    }

    TreeMatch run()
    {
        for (int i : b1_.postorder()) {
            for (int j : b2_.postorder())
                tree_[idx(i, j)] = assign(i, j).total + relabel(i, j);
        }
        TreeMatch out;
        out.key = tree_[idx(b1_.root, b2_.root)];
        collect(b1_.root, b2_.root, out.pairs);
        std::sort(out.pairs.begin(), out.pairs.end());
        out.distance = detail::mapping_cost(b1_, b2_, out.pairs, model_);
        return out;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n2_ + j); }

    std::vector<MatchKey> subtree_costs(const LabeledTree& t, bool first) const
    {
        std::vector<MatchKey> out(static_cast<std::size_t>(t.size()));
        for (int i : t.postorder()) {
            const auto& lab = t.label[static_cast<std::size_t>(i)];
            const double c = first ? detail::unit_edit_cost(lab, std::nullopt, model_)
                                   : detail::unit_edit_cost(std::nullopt, lab, model_);
            MatchKey k = delete_key(c);
            for (int ch : t.children[static_cast<std::size_t>(i)])
                k = k + out[static_cast<std::size_t>(ch)];
            out[static_cast<std::size_t>(i)] = k;
        }
        return out;
    }

    MatchKey relabel(int i, int j) const
    {
        const double c = detail::unit_edit_cost(b1_.label[static_cast<std::size_t>(i)], b2_.label[static_cast<std::size_t>(j)], model_);
        return pair_key(c, b1_.id[static_cast<std::size_t>(i)],
                        b2_.id[static_cast<std::size_t>(j)]);
    }

    EditAssignment<MatchKey> assign(int i, int j) const
    {
        const auto& c1 = b1_.children[static_cast<std::size_t>(i)];
        const auto& c2 = b2_.children[static_cast<std::size_t>(j)];
        return solve_edit_assignment<MatchKey>(
            static_cast<int>(c1.size()), static_cast<int>(c2.size()),
            [&](int a, int b) { return tree_[idx(c1[static_cast<std::size_t>(a)], c2[static_cast<std::size_t>(b)])]; },
            [&](int a) { return tdel_[static_cast<std::size_t>(c1[static_cast<std::size_t>(a)])]; },
            [&](int b) { return tins_[static_cast<std::size_t>(c2[static_cast<std::size_t>(b)])]; });
    }

    void collect(int i, int j, std::vector<std::pair<int, int>>& out) const
    {
        out.emplace_back(i, j);
        const auto a = assign(i, j);
        const auto& c1 = b1_.children[static_cast<std::size_t>(i)];
        const auto& c2 = b2_.children[static_cast<std::size_t>(j)];
        for (std::size_t s = 0; s < a.match.size(); ++s) {
            if (a.match[s] >= 0)
                collect(c1[s], c2[static_cast<std::size_t>(a.match[s])], out);
        }
    }

    const LabeledTree& b1_;
    const LabeledTree& b2_;
    CostModel model_;
    int n2_;
    std::vector<MatchKey> tree_, tdel_, tins_;
};

} // namespace

TreeMatch wasserstein_branch_matching(const LabeledTree& b1, const LabeledTree& b2, const CostModel& model)
{
    return BranchTreeEdit(b1, b2, model).run();
}

Matching wasserstein_matching(const MergeTree& t1, const MergeTree& t2, const CostModel& model)
{
    detail::require_same_direction(t1, t2);
    const auto bdt1 = branch_decomposition(t1);
    const auto bdt2 = branch_decomposition(t2);
    const auto r = wasserstein_branch_matching(branch_labeled_tree(t1, bdt1), branch_labeled_tree(t2, bdt2), model);

    // Leaf pairs are always mutually consistent; terminating-node pairs are
    // added in branch preorder and dropped when they conflict.
    std::vector<std::pair<int, int>> pairs;
    std::vector<char> used1(static_cast<std::size_t>(t1.size()), 0), used2(static_cast<std::size_t>(t2.size()), 0);
    auto take = [&](int a, int b) {
        pairs.emplace_back(a, b);
        used1[static_cast<std::size_t>(a)] = used2[static_cast<std::size_t>(b)] = 1;
    };
    std::vector<int> partner(bdt1.branches.size(), -1);
    for (const auto& [x, y] : r.pairs) {
        partner[static_cast<std::size_t>(x)] = y;
        take(bdt1.branches[static_cast<std::size_t>(x)].leaf, bdt2.branches[static_cast<std::size_t>(y)].leaf);
    }
    take(t1.root(), t2.root());

    std::vector<int> stack{bdt1.root_branch};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        const auto& b = bdt1.branches[static_cast<std::size_t>(x)];
        for (auto it = b.children.rbegin(); it != b.children.rend(); ++it) {
            if (partner[static_cast<std::size_t>(*it)] >= 0)
                stack.push_back(*it);
        }
        const int y = partner[static_cast<std::size_t>(x)];
        const int s1 = b.top, s2 = bdt2.branches[static_cast<std::size_t>(y)].top;
        if (used1[static_cast<std::size_t>(s1)] || used2[static_cast<std::size_t>(s2)])
            continue;
        const bool consistent = std::all_of(pairs.begin(), pairs.end(), [&](const std::pair<int, int>& p) {
            return t1.is_ancestor(s1, p.first) == t2.is_ancestor(s2, p.second) &&
                   t1.is_ancestor(p.first, s1) == t2.is_ancestor(p.second, s2);
        });
        if (consistent)
            take(s1, s2);
    }
    return make_matching(Method::Wasserstein, r.distance, std::move(pairs), t1.size(), t2.size());
}

} // namespace mtb
