#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <set>

#include "doctest.h"
#include "mtb/generators.hpp"
#include "mtb/merge_tree.hpp"
#include "mtb/rng.hpp"
#include "support/oracles.hpp"

using namespace mtb;

namespace {

MergeTree make_tree(const std::vector<std::pair<std::int64_t, double>>& nodes, std::vector<int> parent,
                    SweepDirection dir = SweepDirection::Join)
{
    std::vector<MergeTreeNode> n;
    for (const auto& [v, f] : nodes)
        n.push_back({v, f, NodeType::Leaf});
    return MergeTree(std::move(n), std::move(parent), dir);
}

std::set<std::int64_t> leaf_vertices(const MergeTree& t)
{
    std::set<std::int64_t> out;
    for (int l : t.leaves())
        out.insert(t.vertex(l));
    return out;
}

/// Valid structure: single root last, parents after children, internal
/// nodes with at least two children, scalars monotone toward the root.
void check_tree_invariants(const MergeTree& t)
{
    int roots = 0;
    for (int i = 0; i < t.size(); ++i) {
        const int p = t.parent(i);
        if (p < 0) {
            ++roots;
            CHECK(i == t.root());
            continue;
        }
        CHECK(p > i);
        CHECK(sweep_before(t.direction(), t.scalar(i), t.vertex(i), t.scalar(p), t.vertex(p)));
        if (p != t.root())
            CHECK(t.children(p).size() >= 2);
    }
    CHECK(roots == 1);
}

GridField two_peak_field(double small_height)
{
    return gaussian_mixture({48, 48, 1}, {{{12.0, 12.0, 0.0}, 1.0, 5.0}, {{34.0, 34.0, 0.0}, small_height, 5.0}});
}

} // namespace

TEST_CASE("monotone ramp gives a single leaf and the root")
{
    const GridField f({4, 1, 1}, {0.0, 1.0, 2.0, 3.0});
    const auto t = compute_merge_tree(f, SweepDirection::Join);
    REQUIRE(t.size() == 2);
    CHECK(t.vertex(0) == 0);
    CHECK(t.node(0).type == NodeType::Leaf);
    CHECK(t.vertex(t.root()) == 3);
    CHECK(t.node(t.root()).type == NodeType::Root);
    CHECK(critical_type_counts(t).saddles == 0);
}

TEST_CASE("two minima merge at the root of a 3x1 field")
{
    const GridField f({3, 1, 1}, {0.0, 2.0, 1.0});
    const auto t = compute_merge_tree(f, SweepDirection::Join);
    CHECK(leaf_vertices(t) == std::set<std::int64_t>{0, 2});
    CHECK(t.vertex(t.root()) == 1);
    CHECK(t.children(t.root()).size() == 2);
    for (double thr : {0.0, 1.0, 2.0})
        CHECK(oracle::tree_components(t, thr) == oracle::flood_fill_components(f, thr, SweepDirection::Join));
}

TEST_CASE("leaves are exactly the local extrema of the sweep direction")
{
    Rng rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        const Dims dims = trial % 3 == 0 ? Dims{4, 4, 4} : Dims{3 + static_cast<std::int64_t>(rng.below(10)), 3 + static_cast<std::int64_t>(rng.below(10)), 1};
        const auto f = oracle::random_field(rng, dims);
        for (auto dir : {SweepDirection::Join, SweepDirection::Split}) {
            std::set<std::int64_t> extrema;
            for (std::int64_t v = 0; v < f.size(); ++v) {
                bool ext = true;
                for_each_neighbor(f.dims(), v, [&](std::int64_t w) {
                    if (sweep_before(dir, f[w], w, f[v], v))
                        ext = false;
                });
                if (ext)
                    extrema.insert(v);
            }
            const auto t = compute_merge_tree(f, dir);
            CHECK(leaf_vertices(t) == extrema);
            check_tree_invariants(t);
            CHECK(t == compute_merge_tree(f, dir));
        }
    }
}

TEST_CASE("simplification thresholds 0 and 1 and idempotence")
{
    Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = oracle::random_field(rng, {10, 10, 1});
        const auto t = compute_merge_tree(f, SweepDirection::Split);
        CHECK(simplify(t, 0.0, f.range()) == t);
        const auto one = simplify(t, 1.0, f.range());
        CHECK(one.leaves().size() == 1);
        CHECK(one.size() == 2);
        for (double frac : {0.05, 0.2, 0.5}) {
            const auto s = simplify(t, frac, f.range());
            check_tree_invariants(s);
            CHECK(simplify(s, frac, f.range()) == s);
            for (const auto& p : persistence_pairs(s))
                if (p.partner != s.root())
                    CHECK(p.persistence >= frac * f.range());
        }
    }
}

TEST_CASE("low-persistence peak is removed by simplification")
{
    const auto f = two_peak_field(0.05);
    const auto t = compute_merge_tree(f, SweepDirection::Split);
    CHECK(simplify(t, 0.01, f.range()).leaves().size() == 2);
    const auto s = simplify(t, 0.1, f.range());
    REQUIRE(s.leaves().size() == 1);
    CHECK(s.vertex(s.leaves()[0]) == 12 * 48 + 12);
}

TEST_CASE("persistence pairs of a single edge")
{
    const auto t = make_tree({{0, 0.0}, {1, 3.0}}, {1, -1});
    const auto pairs = persistence_pairs(t);
    REQUIRE(pairs.size() == 1);
    CHECK(t.vertex(pairs[0].leaf) == 0);
    CHECK(pairs[0].partner == t.root());
    CHECK(pairs[0].persistence == 3.0);
}

TEST_CASE("elder rule on a three-leaf join tree")
{
    // minima a=0.0, b=0.1, c=0.2; b and c meet at 0.5, then a joins at 1.0.
    const auto t = make_tree({{0, 0.0}, {1, 0.1}, {2, 0.2}, {3, 0.5}, {4, 1.0}, {5, 2.0}}, {4, 3, 3, 4, 5, -1});
    std::map<std::int64_t, double> pers;
    for (const auto& p : persistence_pairs(t))
        pers[t.vertex(p.leaf)] = p.persistence;
    CHECK(pers[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pers[1] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(pers[2] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("persistence is independent of the input node order")
{
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = oracle::random_merge_tree(rng, 2 + static_cast<int>(rng.below(6)), SweepDirection::Join);
        std::vector<int> perm(static_cast<std::size_t>(t.size()));
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<int> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
        std::vector<MergeTreeNode> nodes;
        std::vector<int> parent;
        for (int p : perm) {
            nodes.push_back(t.node(p));
            parent.push_back(t.parent(p) < 0 ? -1 : inv[static_cast<std::size_t>(t.parent(p))]);
        }
        const MergeTree u(std::move(nodes), std::move(parent), t.direction());
        CHECK(u == t);
        double a = 0.0, b = 0.0;
        for (const auto& p : persistence_pairs(t))
            a += p.partner == t.root() ? 0.0 : p.persistence;
        for (const auto& p : persistence_pairs(u))
            b += p.partner == u.root() ? 0.0 : p.persistence;
        CHECK(a == b);
    }
}

TEST_CASE("branch decomposition of small trees")
{
    const auto single = branch_decomposition(make_tree({{0, 0.0}, {1, 3.0}}, {1, -1}));
    REQUIRE(single.branches.size() == 1);
    CHECK(single.branches[0].parent == -1);

    // Leaves 0 (0.0) and 1 (0.4) meet at saddle 2 (1.0); root 3 at 2.0.
    const auto t = make_tree({{0, 0.0}, {1, 0.4}, {2, 1.0}, {3, 2.0}}, {2, 2, 3, -1});
    const auto bdt = branch_decomposition(t);
    REQUIRE(bdt.branches.size() == 2);
    const auto& root_branch = bdt.branches[static_cast<std::size_t>(bdt.root_branch)];
    CHECK(t.vertex(root_branch.leaf) == 0);
    CHECK(root_branch.top == t.root());
    const auto& child = bdt.branches[static_cast<std::size_t>(1 - bdt.root_branch)];
    CHECK(t.vertex(child.leaf) == 1);
    CHECK(child.parent == bdt.root_branch);
    CHECK(child.persistence == doctest::Approx(0.6));
}

TEST_CASE("branches are edge-disjoint and cover every arc")
{
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto dir = trial % 2 ? SweepDirection::Join : SweepDirection::Split;
        const auto t = oracle::random_merge_tree(rng, 1 + static_cast<int>(rng.below(8)), dir);
        const auto bdt = branch_decomposition(t);
        std::vector<int> covered(static_cast<std::size_t>(t.size()), 0);
        int roots = 0;
        for (const auto& b : bdt.branches) {
            REQUIRE(b.path.front() == b.leaf);
            REQUIRE(b.path.back() == b.top);
            for (std::size_t i = 0; i + 1 < b.path.size(); ++i) {
                REQUIRE(t.parent(b.path[i]) == b.path[i + 1]);
                ++covered[static_cast<std::size_t>(b.path[i])];
            }
            roots += b.top == t.root() && b.parent == -1;
        }
        for (int i = 0; i < t.root(); ++i)
            CHECK(covered[static_cast<std::size_t>(i)] == 1);
        CHECK(roots == 1);
        CHECK(bdt.branches.size() == t.leaves().size());
    }
}

TEST_CASE("morse cells of a ramp and of two peaks")
{
    const GridField ramp({5, 4, 1}, [] {
        std::vector<double> v(20);
        std::iota(v.begin(), v.end(), 0.0);
        return v;
    }());
    for (auto a : morse_cells(ramp, SweepDirection::Split).assignment)
        CHECK(a == 19);

    const auto f = two_peak_field(0.8);
    const auto cells = morse_cells(f, SweepDirection::Split);
    const std::set<std::int64_t> targets(cells.assignment.begin(), cells.assignment.end());
    CHECK(targets.size() == 2);
    CHECK(targets == leaf_vertices(compute_merge_tree(f, SweepDirection::Split)));
}

TEST_CASE("every extremum is its own morse cell")
{
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = oracle::random_field(rng, {2 + static_cast<std::int64_t>(rng.below(9)), 2 + static_cast<std::int64_t>(rng.below(9)), 1});
        for (auto dir : {SweepDirection::Join, SweepDirection::Split}) {
            const auto cells = morse_cells(f, dir);
            const auto leaves = leaf_vertices(compute_merge_tree(f, dir));
            for (auto l : leaves)
                CHECK(cells.assignment[static_cast<std::size_t>(l)] == l);
            for (auto a : cells.assignment)
                CHECK(leaves.count(a) == 1);
        }
    }
}

TEST_CASE("epsilon processing merges nearby saddles")
{
    // Leaves 0, 1, 2; saddles 3 (0.50) and 4 (0.51); root 5.
    const auto t = make_tree({{0, 0.0}, {1, 0.1}, {2, 0.2}, {3, 0.50}, {4, 0.51}, {5, 1.0}}, {3, 3, 4, 4, 5, -1});
    CHECK(epsilon_process(t, 0.0, 1.0) == t);
    CHECK(epsilon_process(t, 0.005, 1.0) == t);
    const auto merged = epsilon_process(t, 0.02, 1.0);
    CHECK(merged.size() == 5);
    CHECK(critical_type_counts(merged).saddles == 1);

    Rng rng(10);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = oracle::random_merge_tree(rng, 2 + static_cast<int>(rng.below(6)), SweepDirection::Join);
        const auto e = epsilon_process(r, 1.0, r.scalar_range());
        CHECK(critical_type_counts(e).saddles <= 1);
        CHECK(e.leaves().size() == r.leaves().size());
        const int top = e.parent(e.leaves()[0]);
        for (int l : e.leaves())
            CHECK(e.parent(l) == top);
    }
}

TEST_CASE("critical type counts partition the non-root nodes")
{
    const auto single = make_tree({{0, 0.0}, {1, 3.0}}, {1, -1});
    CHECK(critical_type_counts(single).leaves == 1);
    CHECK(critical_type_counts(single).saddles == 0);
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = oracle::random_merge_tree(rng, 1 + static_cast<int>(rng.below(8)), SweepDirection::Split);
        const auto c = critical_type_counts(t);
        CHECK(c.leaves + c.saddles == t.size() - 1);
    }
}

TEST_CASE("tree json round trip")
{
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = oracle::random_merge_tree(rng, 1 + static_cast<int>(rng.below(7)),
                                                 trial % 2 ? SweepDirection::Join : SweepDirection::Split);
        CHECK(tree_from_json(tree_to_json(t)) == t);
    }
    CHECK_THROWS(tree_from_json("{\"nodes\": 3}"));
}

TEST_CASE("invalid parent arrays are rejected")
{
    CHECK_THROWS_AS(make_tree({{0, 0.0}, {1, 1.0}}, {-1, -1}), std::invalid_argument);
    CHECK_THROWS_AS(make_tree({{0, 1.0}, {1, 0.0}}, {1, -1}), std::invalid_argument);
}
