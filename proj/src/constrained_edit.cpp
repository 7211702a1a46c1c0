#include <algorithm>

#include "matching_detail.hpp"
#include "mtb/assignment.hpp"

namespace mtb {
namespace {

enum class Choice : std::uint8_t { Insert, Delete, Map };

struct Cell {
    MatchKey key;
    Choice choice = Choice::Map;
    int arg = -1;
};

class ConstrainedEdit {
public:
    ConstrainedEdit(const LabeledTree& t1, const LabeledTree& t2, const CostModel& model)
        : t1_(t1), t2_(t2), model_(model), n1_(t1.size()), n2_(t2.size()),
          tree_(static_cast<std::size_t>(n1_ * n2_)), forest_(static_cast<std::size_t>(n1_ * n2_))
    {
        del_.resize(static_cast<std::size_t>(n1_));
        ins_.resize(static_cast<std::size_t>(n2_));
        tdel_.resize(static_cast<std::size_t>(n1_));
        tins_.resize(static_cast<std::size_t>(n2_));
        order1_ = t1.postorder();
        order2_ = t2.postorder();
        for (int i : order1_) {
            del_[static_cast<std::size_t>(i)] = delete_key(detail::unit_edit_cost(t1.label[static_cast<std::size_t>(i)], std::nullopt, model));
            tdel_[static_cast<std::size_t>(i)] = del_[static_cast<std::size_t>(i)];
            for (int c : t1.children[static_cast<std::size_t>(i)])
                tdel_[static_cast<std::size_t>(i)] = tdel_[static_cast<std::size_t>(i)] + tdel_[static_cast<std::size_t>(c)];
        }
        for (int j : order2_) {
            ins_[static_cast<std::size_t>(j)] = delete_key(detail::unit_edit_cost(std::nullopt, t2.label[static_cast<std::size_t>(j)], model));
            tins_[static_cast<std::size_t>(j)] = ins_[static_cast<std::size_t>(j)];
            for (int c : t2.children[static_cast<std::size_t>(j)])
                tins_[static_cast<std::size_t>(j)] = tins_[static_cast<std::size_t>(j)] + tins_[static_cast<std::size_t>(c)];
        }
    }

    TreeMatch run()
    {
        for (int i : order1_) {
            for (int j : order2_) {
                forest_[idx(i, j)] = eval_forest(i, j);
                tree_[idx(i, j)] = eval_tree(i, j);
            }
        }
        const int r1 = t1_.root, r2 = t2_.root;
        TreeMatch out;
        out.key = forest_[idx(r1, r2)].key + relabel(r1, r2);
        out.pairs.emplace_back(r1, r2);
        collect_forest(r1, r2, out.pairs);
        std::sort(out.pairs.begin(), out.pairs.end());
        out.distance = detail::mapping_cost(t1_, t2_, out.pairs, model_);
        return out;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n2_ + j); }

    MatchKey relabel(int i, int j) const
    {
        return pair_key(detail::unit_edit_cost(t1_.label[static_cast<std::size_t>(i)], t2_.label[static_cast<std::size_t>(j)], model_),
                        t1_.id[static_cast<std::size_t>(i)], t2_.id[static_cast<std::size_t>(j)]);
    }

    /// Sum of tins over the children of j except `skip`.
    MatchKey other_tins(int j, int skip) const
    {
        MatchKey k;
        for (int c : t2_.children[static_cast<std::size_t>(j)]) {
            if (c != skip)
                k = k + tins_[static_cast<std::size_t>(c)];
        }
        return k;
    }
    MatchKey other_tdel(int i, int skip) const
    {
        MatchKey k;
        for (int c : t1_.children[static_cast<std::size_t>(i)]) {
            if (c != skip)
                k = k + tdel_[static_cast<std::size_t>(c)];
        }
        return k;
    }

    EditAssignment<MatchKey> assign(int i, int j) const
    {
        const auto& c1 = t1_.children[static_cast<std::size_t>(i)];
        const auto& c2 = t2_.children[static_cast<std::size_t>(j)];
        return solve_edit_assignment<MatchKey>(
            static_cast<int>(c1.size()), static_cast<int>(c2.size()),
            [&](int a, int b) { return tree_[idx(c1[static_cast<std::size_t>(a)], c2[static_cast<std::size_t>(b)])].key; },
            [&](int a) { return tdel_[static_cast<std::size_t>(c1[static_cast<std::size_t>(a)])]; },
            [&](int b) { return tins_[static_cast<std::size_t>(c2[static_cast<std::size_t>(b)])]; });
    }

    static void consider(Cell& best, bool& have, const MatchKey& k, Choice c, int arg)
    {
        if (!have || k < best.key) {
            best = {k, c, arg};
            have = true;
        }
    }

    Cell eval_forest(int i, int j) const
    {
        Cell best;
        bool have = false;
        const auto a = assign(i, j);
        consider(best, have, a.total, Choice::Map, -1);
        for (int t : t2_.children[static_cast<std::size_t>(j)]) {
            const MatchKey k = forest_[idx(i, t)].key + other_tins(j, t) + ins_[static_cast<std::size_t>(t)];
            consider(best, have, k, Choice::Insert, t);
        }
        for (int s : t1_.children[static_cast<std::size_t>(i)]) {
            const MatchKey k = forest_[idx(s, j)].key + other_tdel(i, s) + del_[static_cast<std::size_t>(s)];
            consider(best, have, k, Choice::Delete, s);
        }
        return best;
    }

    Cell eval_tree(int i, int j) const
    {
        Cell best;
        bool have = false;
        consider(best, have, forest_[idx(i, j)].key + relabel(i, j), Choice::Map, -1);
        for (int t : t2_.children[static_cast<std::size_t>(j)]) {
            const MatchKey k = tree_[idx(i, t)].key + other_tins(j, t) + ins_[static_cast<std::size_t>(j)];
            consider(best, have, k, Choice::Insert, t);
        }
        for (int s : t1_.children[static_cast<std::size_t>(i)]) {
            const MatchKey k = tree_[idx(s, j)].key + other_tdel(i, s) + del_[static_cast<std::size_t>(i)];
            consider(best, have, k, Choice::Delete, s);
        }
        return best;
    }

    void collect_tree(int i, int j, std::vector<std::pair<int, int>>& out) const
    {
        const Cell& c = tree_[idx(i, j)];
        switch (c.choice) {
        case Choice::Insert: collect_tree(i, c.arg, out); break;
        case Choice::Delete: collect_tree(c.arg, j, out); break;
        case Choice::Map:
            out.emplace_back(i, j);
            collect_forest(i, j, out);
            break;
        }
    }

    void collect_forest(int i, int j, std::vector<std::pair<int, int>>& out) const
    {
        const Cell& c = forest_[idx(i, j)];
        switch (c.choice) {
        case Choice::Insert: collect_forest(i, c.arg, out); break;
        case Choice::Delete: collect_forest(c.arg, j, out); break;
        case Choice::Map: {
            const auto a = assign(i, j);
            const auto& c1 = t1_.children[static_cast<std::size_t>(i)];
            const auto& c2 = t2_.children[static_cast<std::size_t>(j)];
            for (std::size_t s = 0; s < a.match.size(); ++s) {
                if (a.match[s] >= 0)
                    collect_tree(c1[s], c2[static_cast<std::size_t>(a.match[s])], out);
            }
            break;
        }
        }
    }

    const LabeledTree& t1_;
    const LabeledTree& t2_;
    CostModel model_;
    int n1_, n2_;
    std::vector<Cell> tree_, forest_;
    std::vector<MatchKey> del_, ins_, tdel_, tins_;
    std::vector<int> order1_, order2_;
};

} // namespace

TreeMatch constrained_edit(const LabeledTree& t1, const LabeledTree& t2, const CostModel& model)
{
    return ConstrainedEdit(t1, t2, model).run();
}

Matching constrained_edit_matching(const MergeTree& t1, const MergeTree& t2, const CostModel& model)
{
    detail::require_same_direction(t1, t2);
    const auto r = constrained_edit(node_labeled_tree(t1), node_labeled_tree(t2), model);
    return make_matching(Method::ConstrainedEdit, r.distance, r.pairs, t1.size(), t2.size());
}

} // namespace mtb
