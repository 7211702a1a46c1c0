#include <algorithm>
#include <unordered_map>

#include "matching_detail.hpp"
#include "mtb/assignment.hpp"

namespace mtb {
namespace {

enum class Step : std::uint8_t { Leaves, Advance1, Advance2, Sync };

struct Entry {
    MatchKey key;
    Step step = Step::Leaves;
    int a = -1;
    int b = -1;
};

/// dist(p1, n1, p2, n2): cost of matching a branch that runs from p1 down
/// through n1 with one running from p2 down through n2, including all
/// subtrees that hang off the remaining parts of both branches.
class BranchMapping {
public:
    BranchMapping(const MergeTree& t1, const MergeTree& t2)
        : t1_(t1), t2_(t2), s1_(t1), s2_(t2), len1_(detail::subtree_lengths(t1)), len2_(detail::subtree_lengths(t2))
    {
    }

    Matching run()
    {
        const int r1 = t1_.root(), r2 = t2_.root();
        bool have = false;
        MatchKey best;
        int ba = -1, bb = -1;
        for (int a : t1_.children(r1)) {
            for (int b : t2_.children(r2)) {
                const MatchKey k = dist(r1, a, r2, b).key + hanging(r1, a, r2, b).total;
                if (!have || k < best) {
                    best = k;
                    ba = a;
                    bb = b;
                    have = true;
                }
            }
        }
        std::vector<std::pair<int, int>> pairs{{r1, r2}};
        collect(r1, ba, r2, bb, pairs);
        collect_hanging(r1, ba, r2, bb, pairs);
        best = best + pair_key(0.0, t1_.vertex(r1), t2_.vertex(r2));
        return make_matching(Method::BranchMapping, best.cost, std::move(pairs), t1_.size(), t2_.size());
    }

private:
    MatchKey del1(int p, int x) const
    {
        return delete_key(std::abs(t1_.scalar(p) - t1_.scalar(x)) + len1_[static_cast<std::size_t>(x)]);
    }
    MatchKey del2(int p, int y) const
    {
        return delete_key(std::abs(t2_.scalar(p) - t2_.scalar(y)) + len2_[static_cast<std::size_t>(y)]);
    }

    std::vector<int> others(const MergeTree& t, int n, int skip) const
    {
        std::vector<int> out;
        for (int c : t.children(n))
            if (c != skip)
                out.push_back(c);
        return out;
    }

    /// Assignment of the subtrees hanging off n1 and n2 (all children except a and b).
    EditAssignment<MatchKey> hanging(int n1, int a, int n2, int b)
    {
        const auto h1 = others(t1_, n1, a);
        const auto h2 = others(t2_, n2, b);
        return solve_edit_assignment<MatchKey>(
            static_cast<int>(h1.size()), static_cast<int>(h2.size()),
            [&](int x, int y) { return dist(n1, h1[static_cast<std::size_t>(x)], n2, h2[static_cast<std::size_t>(y)]).key; },
            [&](int x) { return del1(n1, h1[static_cast<std::size_t>(x)]); },
            [&](int y) { return del2(n2, h2[static_cast<std::size_t>(y)]); });
    }

    const Entry& dist(int p1, int n1, int p2, int n2)
    {
        const std::uint64_t key = static_cast<std::uint64_t>(s1_(p1, n1)) * static_cast<std::uint64_t>(s2_.count()) +
                                  static_cast<std::uint64_t>(s2_(p2, n2));
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;

        Entry best;
        bool have = false;
        auto consider = [&](const MatchKey& k, Step s, int a, int b) {
            if (!have || k < best.key) {
                best = {k, s, a, b};
                have = true;
            }
        };
        const bool leaf1 = t1_.is_leaf(n1), leaf2 = t2_.is_leaf(n2);
        if (leaf1 && leaf2) {
            const double c = std::max(std::abs(t1_.scalar(n1) - t2_.scalar(n2)), std::abs(t1_.scalar(p1) - t2_.scalar(p2)));
            consider(pair_key(c, t1_.vertex(n1), t2_.vertex(n2)), Step::Leaves, -1, -1);
        }
        if (!leaf1) {
            for (int a : t1_.children(n1)) {
                MatchKey k = dist(p1, a, p2, n2).key;
                for (int x : others(t1_, n1, a))
                    k = k + del1(n1, x);
                consider(k, Step::Advance1, a, -1);
            }
        }
        if (!leaf2) {
            for (int b : t2_.children(n2)) {
                MatchKey k = dist(p1, n1, p2, b).key;
                for (int y : others(t2_, n2, b))
                    k = k + del2(n2, y);
                consider(k, Step::Advance2, -1, b);
            }
        }
        if (!leaf1 && !leaf2) {
            for (int a : t1_.children(n1)) {
                for (int b : t2_.children(n2)) {
                    const auto h = hanging(n1, a, n2, b);
                    if (h.matched == 0)
                        continue;
                    const MatchKey k = dist(p1, a, p2, b).key + h.total + pair_key(0.0, t1_.vertex(n1), t2_.vertex(n2));
                    consider(k, Step::Sync, a, b);
                }
            }
        }
        return memo_.emplace(key, best).first->second;
    }

    void collect(int p1, int n1, int p2, int n2, std::vector<std::pair<int, int>>& out)
    {
        const Entry e = dist(p1, n1, p2, n2);
        switch (e.step) {
        case Step::Leaves: out.emplace_back(n1, n2); break;
        case Step::Advance1: collect(p1, e.a, p2, n2, out); break;
        case Step::Advance2: collect(p1, n1, p2, e.b, out); break;
        case Step::Sync:
            out.emplace_back(n1, n2);
            collect(p1, e.a, p2, e.b, out);
            collect_hanging(n1, e.a, n2, e.b, out);
            break;
        }
    }

    void collect_hanging(int n1, int a, int n2, int b, std::vector<std::pair<int, int>>& out)
    {
        const auto h = hanging(n1, a, n2, b);
        const auto h1 = others(t1_, n1, a);
        const auto h2 = others(t2_, n2, b);
        for (std::size_t x = 0; x < h.match.size(); ++x) {
            if (h.match[x] >= 0)
                collect(n1, h1[x], n2, h2[static_cast<std::size_t>(h.match[x])], out);
        }
    }

    const MergeTree& t1_;
    const MergeTree& t2_;
    detail::StemIndex s1_, s2_;
    std::vector<double> len1_, len2_;
    std::unordered_map<std::uint64_t, Entry> memo_;
};

} // namespace

Matching branch_mapping(const MergeTree& t1, const MergeTree& t2)
{
    detail::require_same_direction(t1, t2);
    return BranchMapping(t1, t2).run();
}

} // namespace mtb
