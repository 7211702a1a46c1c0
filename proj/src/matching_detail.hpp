#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "mtb/errors.hpp"
#include "mtb/matching.hpp"

namespace mtb::detail {

/// Per-operation contribution to the objective: plain cost for L-infinity,
/// squared cost for L2 (the total is square-rooted at the end).
inline double unit_cost(double c, Norm norm) { return norm == Norm::Linf ? c : c * c; }
inline double finish_cost(double total, Norm norm) { return norm == Norm::Linf ? total : std::sqrt(total); }

/// unit_cost(edit_cost(a, b, model)), with the L2 square formed directly so
/// that labels on a dyadic grid give exact totals.
inline double unit_edit_cost(const std::optional<Interval>& a, const std::optional<Interval>& b, const CostModel& model)
{
    if (model.norm == Norm::Linf)
        return edit_cost(a, b, model);
    if (!a && !b)
        return 0.0;
    if (!a || !b) {
        const Interval& x = a ? *a : *b;
        const double span = x.death - x.birth;
        return span * span / 2.0;
    }
    const double db = a->birth - b->birth;
    const double dd = a->death - b->death;
    return db * db + dd * dd;
}

inline void require_same_direction(const MergeTree& t1, const MergeTree& t2)
{
    if (t1.direction() != t2.direction())
        throw DirectionMismatch(std::string("cannot match a ") + to_string(t1.direction()) + " tree with a " +
                                to_string(t2.direction()) + " tree");
}

/// Cost of an edit mapping summed in a canonical order (sorted pairs, then
/// deletions, then insertions), so equal mappings give bit-identical totals.
inline double mapping_cost(const LabeledTree& t1, const LabeledTree& t2, std::vector<std::pair<int, int>> pairs,
                           const CostModel& model)
{
    std::sort(pairs.begin(), pairs.end());
    std::vector<char> used1(static_cast<std::size_t>(t1.size()), 0), used2(static_cast<std::size_t>(t2.size()), 0);
    double total = 0.0;
    for (const auto& [a, b] : pairs) {
        total += unit_edit_cost(t1.label[static_cast<std::size_t>(a)], t2.label[static_cast<std::size_t>(b)], model);
        used1[static_cast<std::size_t>(a)] = used2[static_cast<std::size_t>(b)] = 1;
    }
    for (int i = 0; i < t1.size(); ++i) {
        if (!used1[static_cast<std::size_t>(i)])
            total += unit_edit_cost(t1.label[static_cast<std::size_t>(i)], std::nullopt, model);
    }
    for (int j = 0; j < t2.size(); ++j) {
        if (!used2[static_cast<std::size_t>(j)])
            total += unit_edit_cost(std::nullopt, t2.label[static_cast<std::size_t>(j)], model);
    }
    return finish_cost(total, model.norm);
}

/// Dense numbering of (ancestor, descendant) node pairs of a merge tree.
class StemIndex {
public:
    explicit StemIndex(const MergeTree& t) : tree_(&t), base_(static_cast<std::size_t>(t.size()))
    {
        std::int64_t next = 0;
        for (int n = 0; n < t.size(); ++n) {
            base_[static_cast<std::size_t>(n)] = next;
            next += t.depth(n);
        }
        count_ = next;
    }
    std::int64_t count() const noexcept { return count_; }
    /// p must be a proper ancestor of n.
    std::int64_t operator()(int p, int n) const
    {
        return base_[static_cast<std::size_t>(n)] + tree_->depth(n) - tree_->depth(p) - 1;
    }

private:
    const MergeTree* tree_;
    std::vector<std::int64_t> base_;
    std::int64_t count_ = 0;
};

/// Total arc length below each node.
inline std::vector<double> subtree_lengths(const MergeTree& t)
{
    std::vector<double> out(static_cast<std::size_t>(t.size()), 0.0);
    for (int i = 0; i < t.size(); ++i) {
        for (int c : t.children(i))
            out[static_cast<std::size_t>(i)] += std::abs(t.scalar(i) - t.scalar(c)) + out[static_cast<std::size_t>(c)];
    }
    return out;
}

} // namespace mtb::detail
