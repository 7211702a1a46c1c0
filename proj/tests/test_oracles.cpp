#include <cmath>

#include "doctest.h"
#include "mtb/matching.hpp"
#include "support/oracles.hpp"

using namespace mtb;

namespace {

/// Picks sizes whose product respects the brute-force guard.
std::pair<int, int> guarded_sizes(Rng& rng)
{
    for (;;) {
        const int a = 1 + static_cast<int>(rng.below(8));
        const int b = 1 + static_cast<int>(rng.below(8));
        if (a * b <= kBruteForceLimit && a * b >= 2)
            return {a, b};
    }
}

} // namespace

TEST_CASE("merge tree component counts agree with flood fill on random fields")
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Dims dims{2 + static_cast<std::int64_t>(rng.below(11)), 2 + static_cast<std::int64_t>(rng.below(11)), 1};
        const auto field = oracle::random_field(rng, dims);
        for (auto dir : {SweepDirection::Join, SweepDirection::Split}) {
            const auto tree = compute_merge_tree(field, dir);
            for (std::int64_t v = 0; v < field.size(); ++v) {
                const double c = field[v];
                REQUIRE(oracle::tree_components(tree, c) == oracle::flood_fill_components(field, c, dir));
            }
        }
    }
}

TEST_CASE("constrained edit distance equals the brute-force disjoint mapping")
{
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const auto [a, b] = guarded_sizes(rng);
        const auto t1 = oracle::random_labeled_tree(rng, a);
        const auto t2 = oracle::random_labeled_tree(rng, b);
        for (auto norm : {Norm::Linf, Norm::L2}) {
            const auto dp = constrained_edit(t1, t2, {norm});
            const auto bf = brute_force_matching(t1, t2, {true, true, false}, {norm});
            CAPTURE(trial);
            REQUIRE(std::abs(dp.distance - bf.distance) <= 1e-9);
            REQUIRE(dp.pairs == bf.pairs);
        }
    }
}

TEST_CASE("wasserstein tree distance equals the brute-force collapse mapping")
{
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const auto [a, b] = guarded_sizes(rng);
        const auto t1 = oracle::random_labeled_tree(rng, a);
        const auto t2 = oracle::random_labeled_tree(rng, b);
        for (auto norm : {Norm::Linf, Norm::L2}) {
            const auto dp = wasserstein_branch_matching(t1, t2, {norm});
            const auto bf = brute_force_matching(t1, t2, {true, false, true}, {norm});
            CAPTURE(trial);
            REQUIRE(std::abs(dp.distance - bf.distance) <= 1e-9);
            REQUIRE(dp.pairs == bf.pairs);
        }
    }
}

TEST_CASE("branch mapping distance equals enumeration over all branch decompositions")
{
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dir = rng.below(2) ? SweepDirection::Join : SweepDirection::Split;
        const auto t1 = oracle::random_merge_tree(rng, 1 + static_cast<int>(rng.below(5)), dir);
        const auto t2 = oracle::random_merge_tree(rng, 1 + static_cast<int>(rng.below(5)), dir);
        const auto m = branch_mapping(t1, t2);
        CAPTURE(trial);
        REQUIRE(std::abs(m.distance - oracle::brute_force_branch_distance(t1, t2)) <= 1e-9);
    }
}
