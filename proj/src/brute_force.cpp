#include <algorithm>
#include <stdexcept>

#include "matching_detail.hpp"

namespace mtb {
namespace {

class BruteForce {
public:
    BruteForce(const LabeledTree& t1, const LabeledTree& t2, const MappingConstraints& c, const CostModel& model)
        : t1_(t1), t2_(t2), c_(c), model_(model), n1_(t1.size()), n2_(t2.size())
    {
        anc1_ = ancestry(t1);
        anc2_ = ancestry(t2);
        map_.assign(static_cast<std::size_t>(n1_), -1);
        used_.assign(static_cast<std::size_t>(n2_), 0);
        for (int i = 0; i < n1_; ++i)
            if (i != t1.root)
                order_.push_back(i);
    }

    TreeMatch run()
    {
        add(t1_.root, t2_.root);
        search(0);
        if (!found_)
            throw std::logic_error("brute force found no admissible mapping");
        TreeMatch out;
        out.key = best_key_;
        out.pairs = best_;
        out.distance = detail::mapping_cost(t1_, t2_, out.pairs, model_);
        return out;
    }

private:
    static std::vector<char> ancestry(const LabeledTree& t)
    {
        const int n = t.size();
        std::vector<char> a(static_cast<std::size_t>(n * n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a[static_cast<std::size_t>(i * n + j)] = t.is_ancestor(i, j) ? 1 : 0;
        return a;
    }

    bool a1(int x, int y) const { return anc1_[static_cast<std::size_t>(x * n1_ + y)] != 0; }
    bool a2(int x, int y) const { return anc2_[static_cast<std::size_t>(x * n2_ + y)] != 0; }
    bool admissible(int i, int j) const
    {
        if (c_.ancestor) {
            for (const auto& [a, b] : pairs_) {
                if (a1(a, i) != a2(b, j) || a1(i, a) != a2(j, b))
                    return false;
            }
        }
        return true;
    }

    void add(int i, int j)
    {
        map_[static_cast<std::size_t>(i)] = j;
        used_[static_cast<std::size_t>(j)] = 1;
        pairs_.emplace_back(i, j);
    }
    void remove(int i, int j)
    {
        map_[static_cast<std::size_t>(i)] = -1;
        used_[static_cast<std::size_t>(j)] = 0;
        pairs_.pop_back();
    }

    bool collapse_ok() const
    {
        for (int i = 0; i < n1_; ++i) {
            if (map_[static_cast<std::size_t>(i)] >= 0)
                continue;
            for (int x = 0; x < n1_; ++x)
                if (x != i && a1(i, x) && map_[static_cast<std::size_t>(x)] >= 0)
                    return false;
        }
        for (int j = 0; j < n2_; ++j) {
            if (used_[static_cast<std::size_t>(j)])
                continue;
            for (int y = 0; y < n2_; ++y)
                if (y != j && a2(j, y) && used_[static_cast<std::size_t>(y)])
                    return false;
        }
        return true;
    }

    bool has1(int x) const
    {
        for (int y = 0; y < n1_; ++y)
            if (map_[static_cast<std::size_t>(y)] >= 0 && a1(x, y))
                return true;
        return false;
    }
    bool has2(int x) const
    {
        for (int y = 0; y < n2_; ++y)
            if (used_[static_cast<std::size_t>(y)] && a2(x, y))
                return true;
        return false;
    }

    /// The mapped nodes of the forests f1 and f2 correspond to each other:
    /// either tree by tree, or all of one side lies inside the child forest
    /// of a single unmapped tree on the other side.
    bool forest_ok(const std::vector<int>& f1, const std::vector<int>& f2) const
    {
        std::vector<int> g1, g2;
        for (int a : f1)
            if (has1(a))
                g1.push_back(a);
        for (int b : f2)
            if (has2(b))
                g2.push_back(b);
        if (g1.empty() || g2.empty())
            return g1.empty() && g2.empty();
        if (g1.size() == g2.size()) {
            bool ok = true;
            std::vector<char> taken(g2.size(), 0);
            for (std::size_t x = 0; x < g1.size() && ok; ++x) {
                int target = -1;
                for (int y = 0; y < n1_ && ok; ++y) {
                    const int m = map_[static_cast<std::size_t>(y)];
                    if (m < 0 || !a1(g1[x], y))
                        continue;
                    int owner = -1;
                    for (std::size_t k = 0; k < g2.size(); ++k)
                        if (a2(g2[k], m))
                            owner = static_cast<int>(k);
                    if (owner < 0 || (target >= 0 && owner != target))
                        ok = false;
                    target = owner;
                }
                if (ok && taken[static_cast<std::size_t>(target)])
                    ok = false;
                if (ok) {
                    taken[static_cast<std::size_t>(target)] = 1;
                    ok = tree_ok(g1[x], g2[static_cast<std::size_t>(target)]);
                }
            }
            if (ok)
                return true;
        }
        if (g2.size() == 1 && !used_[static_cast<std::size_t>(g2[0])] &&
            forest_ok(f1, t2_.children[static_cast<std::size_t>(g2[0])]))
            return true;
        if (g1.size() == 1 && map_[static_cast<std::size_t>(g1[0])] < 0 &&
            forest_ok(t1_.children[static_cast<std::size_t>(g1[0])], f2))
            return true;
        return false;
    }

    /// Subtrees rooted at a and b hold exactly each other's mapped nodes.
    bool tree_ok(int a, int b) const
    {
        if (map_[static_cast<std::size_t>(a)] == b)
            return forest_ok(t1_.children[static_cast<std::size_t>(a)], t2_.children[static_cast<std::size_t>(b)]);
        if (!used_[static_cast<std::size_t>(b)]) {
            int only = -1, count = 0;
            for (int c : t2_.children[static_cast<std::size_t>(b)])
                if (has2(c)) {
                    only = c;
                    ++count;
                }
            if (count == 1 && tree_ok(a, only))
                return true;
        }
        if (map_[static_cast<std::size_t>(a)] < 0) {
            int only = -1, count = 0;
            for (int c : t1_.children[static_cast<std::size_t>(a)])
                if (has1(c)) {
                    only = c;
                    ++count;
                }
            if (count == 1 && tree_ok(only, b))
                return true;
        }
        return false;
    }

    bool disjoint_ok() const
    {
        return forest_ok(t1_.children[static_cast<std::size_t>(t1_.root)], t2_.children[static_cast<std::size_t>(t2_.root)]);
    }

    MatchKey key_of() const
    {
        MatchKey k;
        for (const auto& [a, b] : pairs_) {
            const double c = detail::unit_edit_cost(t1_.label[static_cast<std::size_t>(a)], t2_.label[static_cast<std::size_t>(b)], model_);
            k = k + pair_key(c, t1_.id[static_cast<std::size_t>(a)],
                             t2_.id[static_cast<std::size_t>(b)]);
        }
        for (int i = 0; i < n1_; ++i) {
            if (map_[static_cast<std::size_t>(i)] < 0)
                k = k + delete_key(detail::unit_edit_cost(t1_.label[static_cast<std::size_t>(i)], std::nullopt, model_));
        }
        for (int j = 0; j < n2_; ++j) {
            if (!used_[static_cast<std::size_t>(j)])
                k = k + delete_key(detail::unit_edit_cost(std::nullopt, t2_.label[static_cast<std::size_t>(j)], model_));
        }
        return k;
    }

    void search(std::size_t pos)
    {
        if (pos == order_.size()) {
            if (c_.collapse && !collapse_ok())
                return;
            if (c_.disjoint && !disjoint_ok())
                return;
            const MatchKey k = key_of();
            if (!found_ || k < best_key_) {
                best_key_ = k;
                best_ = pairs_;
                std::sort(best_.begin(), best_.end());
                found_ = true;
            }
            return;
        }
        const int i = order_[pos];
        search(pos + 1);
        for (int j = 0; j < n2_; ++j) {
            if (used_[static_cast<std::size_t>(j)] || !admissible(i, j))
                continue;
            add(i, j);
            search(pos + 1);
            remove(i, j);
        }
    }

    const LabeledTree& t1_;
    const LabeledTree& t2_;
    MappingConstraints c_;
    CostModel model_;
    int n1_, n2_;
    std::vector<char> anc1_, anc2_;
    std::vector<int> order_;
    std::vector<int> map_;
    std::vector<char> used_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::pair<int, int>> best_;
    MatchKey best_key_;
    bool found_ = false;
};

} // namespace

TreeMatch brute_force_matching(const LabeledTree& t1, const LabeledTree& t2, const MappingConstraints& constraints,
                               const CostModel& model)
{
    if (static_cast<std::int64_t>(t1.size()) * t2.size() > kBruteForceLimit)
        throw std::invalid_argument("brute force guard: |T1|*|T2| = " +
                                    std::to_string(static_cast<std::int64_t>(t1.size()) * t2.size()) + " exceeds " +
                                    std::to_string(kBruteForceLimit));
    return BruteForce(t1, t2, constraints, model).run();
}

Matching brute_force_matching(const MergeTree& t1, const MergeTree& t2, const MappingConstraints& constraints,
                              const CostModel& model)
{
    detail::require_same_direction(t1, t2);
    const auto r = brute_force_matching(node_labeled_tree(t1), node_labeled_tree(t2), constraints, model);
    return make_matching(Method::ConstrainedEdit, r.distance, r.pairs, t1.size(), t2.size());
}

} // namespace mtb
