#include "mtb/instability.hpp"

#include <algorithm>
#include <tuple>

#include "mtb/rng.hpp"

namespace mtb {

std::vector<int> feature_leaves(const InstabilityField& field, const MergeTree& tree)
{
    const auto leaves = tree.leaves();
    std::vector<std::tuple<double, int, int>> cand;
    for (std::size_t f = 0; f < field.features.size(); ++f) {
        const auto& c = field.features[f].center;
        for (std::size_t l = 0; l < leaves.size(); ++l) {
            const auto p = field.field.coords(tree.vertex(leaves[l]));
            double d = 0.0;
            for (int k = 0; k < 3; ++k)
                d += (static_cast<double>(p[static_cast<std::size_t>(k)]) - c[static_cast<std::size_t>(k)]) *
                     (static_cast<double>(p[static_cast<std::size_t>(k)]) - c[static_cast<std::size_t>(k)]);
            cand.emplace_back(d, static_cast<int>(f), static_cast<int>(l));
        }
    }
    std::sort(cand.begin(), cand.end());
    std::vector<int> out(field.features.size(), -1);
    std::vector<char> taken(leaves.size(), 0);
    for (const auto& [d, f, l] : cand) {
        if (out[static_cast<std::size_t>(f)] >= 0 || taken[static_cast<std::size_t>(l)])
            continue;
        out[static_cast<std::size_t>(f)] = leaves[static_cast<std::size_t>(l)];
        taken[static_cast<std::size_t>(l)] = 1;
    }
    return out;
}

InstabilityPair instability_pair(std::uint64_t seed, double amplitude, std::int64_t grid_size)
{
    return {instability_field({amplitude, derive_seed(seed, 0)}, grid_size),
            instability_field({amplitude, derive_seed(seed, 1)}, grid_size)};
}

InstabilityOutcome instability_trial(const InstabilityPair& pair, std::uint64_t seed, Method method, LookAhead la,
                                     double simplify_fraction)
{
    auto tree_of = [&](const InstabilityField& f) {
        return simplify(compute_merge_tree(f.field, SweepDirection::Split), simplify_fraction, f.field.range());
    };
    const MergeTree t1 = tree_of(pair.first);
    const MergeTree t2 = tree_of(pair.second);
    const auto l1 = feature_leaves(pair.first, t1);
    const auto l2 = feature_leaves(pair.second, t2);
    const Matching m = match_trees(t1, t2, method, la);
    std::vector<int> partner(static_cast<std::size_t>(t1.size()), -1);
    for (const auto& [a, b] : m.pairs)
        partner[static_cast<std::size_t>(a)] = b;
    InstabilityOutcome out;
    out.seed = seed;
    out.method = method;
    out.features = static_cast<int>(l1.size());
    for (std::size_t f = 0; f < l1.size(); ++f) {
        if (l1[f] >= 0 && l2[f] >= 0 && partner[static_cast<std::size_t>(l1[f])] == l2[f])
            ++out.correct;
    }
    return out;
}

} // namespace mtb
