#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "matching_detail.hpp"
#include "mtb/assignment.hpp"

namespace mtb {
namespace {

enum class Step : std::uint8_t { Match, Extend1, Extend2 };

struct PathEntry {
    MatchKey key;
    Step step = Step::Match;
    int arg = -1;
};

struct ForestEntry {
    MatchKey key;
    int front1 = 0;
    int front2 = 0;
    bool done = false;
};

/// Subtree roots that can be aligned below a node when up to k of its
/// descendant saddles (a top-closed set) are contracted.
std::vector<std::vector<int>> frontiers(const MergeTree& t, int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> contracted;
    std::vector<int> boundary;
    for (int c : t.children(n))
        if (!t.is_leaf(c))
            boundary.push_back(c);

    auto emit = [&] {
        std::vector<int> f;
        for (int c : t.children(n))
            if (std::find(contracted.begin(), contracted.end(), c) == contracted.end())
                f.push_back(c);
        for (int e : contracted)
            for (int c : t.children(e))
                if (std::find(contracted.begin(), contracted.end(), c) == contracted.end())
                    f.push_back(c);
        std::sort(f.begin(), f.end());
        out.push_back(std::move(f));
    };
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == boundary.size()) {
            emit();
            return;
        }
        self(self, pos + 1);
        if (static_cast<int>(contracted.size()) < k) {
            const int e = boundary[pos];
            const std::size_t mark = boundary.size();
            contracted.push_back(e);
            for (int c : t.children(e))
                if (!t.is_leaf(c))
                    boundary.push_back(c);
            self(self, pos + 1);
            boundary.resize(mark);
            contracted.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

class PathMapping {
public:
    PathMapping(const MergeTree& t1, const MergeTree& t2, int k)
        : t1_(t1), t2_(t2), s1_(t1), s2_(t2), len1_(detail::subtree_lengths(t1)), len2_(detail::subtree_lengths(t2)),
          forest_(static_cast<std::size_t>(t1.size()) * static_cast<std::size_t>(t2.size()))
    {
        for (int i = 0; i < t1.size(); ++i)
            front1_.push_back(frontiers(t1, i, k));
        for (int j = 0; j < t2.size(); ++j)
            front2_.push_back(frontiers(t2, j, k));
    }

    Matching run()
    {
        const int r1 = t1_.root(), r2 = t2_.root();
        const MatchKey total = pair_key(0.0, t1_.vertex(r1), t2_.vertex(r2)) + forest(r1, r2).key;
        std::vector<std::pair<int, int>> pairs{{r1, r2}};
        collect_forest(r1, r2, pairs);
        return make_matching(Method::PathMapping, total.cost, std::move(pairs), t1_.size(), t2_.size());
    }

private:
    MatchKey del1(int x) const
    {
        const int p = t1_.parent(x);
        return delete_key(std::abs(t1_.scalar(p) - t1_.scalar(x)) + len1_[static_cast<std::size_t>(x)]);
    }
    MatchKey del2(int y) const
    {
        const int p = t2_.parent(y);
        return delete_key(std::abs(t2_.scalar(p) - t2_.scalar(y)) + len2_[static_cast<std::size_t>(y)]);
    }

    EditAssignment<MatchKey> align(int n1, const std::vector<int>& f1, int n2, const std::vector<int>& f2)
    {
        return solve_edit_assignment<MatchKey>(
            static_cast<int>(f1.size()), static_cast<int>(f2.size()),
            [&](int x, int y) { return path(n1, f1[static_cast<std::size_t>(x)], n2, f2[static_cast<std::size_t>(y)]).key; },
            [&](int x) { return del1(f1[static_cast<std::size_t>(x)]); },
            [&](int y) { return del2(f2[static_cast<std::size_t>(y)]); });
    }

    const ForestEntry& forest(int n1, int n2)
    {
        ForestEntry& slot = forest_[static_cast<std::size_t>(n1) * static_cast<std::size_t>(t2_.size()) +
                                    static_cast<std::size_t>(n2)];
        if (slot.done)
            return slot;
        ForestEntry best;
        bool have = false;
        const auto& fs1 = front1_[static_cast<std::size_t>(n1)];
        const auto& fs2 = front2_[static_cast<std::size_t>(n2)];
        for (std::size_t a = 0; a < fs1.size(); ++a) {
            for (std::size_t b = 0; b < fs2.size(); ++b) {
                const MatchKey k = align(n1, fs1[a], n2, fs2[b]).total;
                if (!have || k < best.key) {
                    best = {k, static_cast<int>(a), static_cast<int>(b), true};
                    have = true;
                }
            }
        }
        slot = best;
        return slot;
    }

    const PathEntry& path(int p1, int n1, int p2, int n2)
    {
        const std::uint64_t key = static_cast<std::uint64_t>(s1_(p1, n1)) * static_cast<std::uint64_t>(s2_.count()) +
                                  static_cast<std::uint64_t>(s2_(p2, n2));
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;

        PathEntry best;
        bool have = false;
        auto consider = [&](const MatchKey& k, Step s, int arg) {
            if (!have || k < best.key) {
                best = {k, s, arg};
                have = true;
            }
        };
        const double l1 = std::abs(t1_.scalar(p1) - t1_.scalar(n1));
        const double l2 = std::abs(t2_.scalar(p2) - t2_.scalar(n2));
        consider(pair_key(std::abs(l1 - l2), t1_.vertex(n1), t2_.vertex(n2)) + forest(n1, n2).key, Step::Match, -1);
        for (int a : t1_.children(n1)) {
            MatchKey k = path(p1, a, p2, n2).key;
            for (int x : t1_.children(n1))
                if (x != a)
                    k = k + del1(x);
            consider(k, Step::Extend1, a);
        }
        for (int b : t2_.children(n2)) {
            MatchKey k = path(p1, n1, p2, b).key;
            for (int y : t2_.children(n2))
                if (y != b)
                    k = k + del2(y);
            consider(k, Step::Extend2, b);
        }
        return memo_.emplace(key, best).first->second;
    }

    void collect_path(int p1, int n1, int p2, int n2, std::vector<std::pair<int, int>>& out)
    {
        const PathEntry e = path(p1, n1, p2, n2);
        switch (e.step) {
        case Step::Match:
            out.emplace_back(n1, n2);
            collect_forest(n1, n2, out);
            break;
        case Step::Extend1: collect_path(p1, e.arg, p2, n2, out); break;
        case Step::Extend2: collect_path(p1, n1, p2, e.arg, out); break;
        }
    }

    void collect_forest(int n1, int n2, std::vector<std::pair<int, int>>& out)
    {
        const ForestEntry e = forest(n1, n2);
        const auto f1 = front1_[static_cast<std::size_t>(n1)][static_cast<std::size_t>(e.front1)];
        const auto f2 = front2_[static_cast<std::size_t>(n2)][static_cast<std::size_t>(e.front2)];
        const auto a = align(n1, f1, n2, f2);
        for (std::size_t x = 0; x < a.match.size(); ++x) {
            if (a.match[x] >= 0)
                collect_path(n1, f1[x], n2, f2[static_cast<std::size_t>(a.match[x])], out);
        }
    }

    const MergeTree& t1_;
    const MergeTree& t2_;
    detail::StemIndex s1_, s2_;
    std::vector<double> len1_, len2_;
    std::vector<ForestEntry> forest_;
    std::vector<std::vector<std::vector<int>>> front1_, front2_;
    std::unordered_map<std::uint64_t, PathEntry> memo_;
};

} // namespace

Matching path_mapping(const MergeTree& t1, const MergeTree& t2, LookAhead la)
{
    if (la.k < 0)
        throw std::invalid_argument("look-ahead must be non-negative");
    detail::require_same_direction(t1, t2);
    return PathMapping(t1, t2, la.k).run();
}

} // namespace mtb
