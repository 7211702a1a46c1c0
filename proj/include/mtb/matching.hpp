#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtb/labeled_tree.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb {

enum class Method { ConstrainedEdit, Wasserstein, BranchMapping, PathMapping };

const char* to_string(Method m);
/// Accepts "edit", "wasserstein", "branch", "path".
Method parse_method(const std::string& s);
inline constexpr Method kAllMethods[] = {Method::ConstrainedEdit, Method::Wasserstein, Method::BranchMapping,
                                         Method::PathMapping};

enum class Norm { Linf, L2 };

struct CostModel {
    Norm norm = Norm::Linf;
};

struct LookAhead {
    int k = 4;
};

/// Relabel cost between two intervals, or the cost of deleting an interval
/// (distance to its diagonal projection) when one side is empty.
double edit_cost(const std::optional<Interval>& a, const std::optional<Interval>& b, const CostModel& model);

/// Objective used by every matcher: total cost first, then the summed
/// vertex-index gap of the pairs, then more pairs, then a hash salt that
/// separates the remaining ties. Compared lexicographically.
struct MatchKey {
    double cost = 0.0;
    std::int64_t gap = 0;
    std::int64_t missing = 0;
    std::int64_t salt = 0;

    friend MatchKey operator+(const MatchKey& a, const MatchKey& b)
    {
        return {a.cost + b.cost, a.gap + b.gap, a.missing + b.missing, a.salt + b.salt};
    }
    friend MatchKey operator-(const MatchKey& a, const MatchKey& b)
    {
        return {a.cost - b.cost, a.gap - b.gap, a.missing - b.missing, a.salt - b.salt};
    }
    friend auto operator<=>(const MatchKey&, const MatchKey&) = default;
};

MatchKey pair_key(double cost, std::int64_t id1, std::int64_t id2);
inline MatchKey delete_key(double cost) { return {cost, 0, 0, 0}; }

/// Matching between two merge trees. Pairs and unmatched lists hold node
/// indices of the respective trees.
struct Matching {
    Method method = Method::ConstrainedEdit;
    double distance = 0.0;
    std::vector<std::pair<int, int>> pairs;  // sorted by first node
    std::vector<int> unmatched1;
    std::vector<int> unmatched2;
};

/// Fills the unmatched lists and sorts the pairs.
Matching make_matching(Method method, double distance, std::vector<std::pair<int, int>> pairs, int n1, int n2);

/// Empty string if the matching is a partial bijection covering both node
/// sets and ancestor-preserving in both directions; otherwise a description
/// of the first violation.
std::string validate_matching(const Matching& m, const MergeTree& t1, const MergeTree& t2);
std::string validate_matching(const std::vector<std::pair<int, int>>& pairs, const LabeledTree& t1,
                              const LabeledTree& t2);

/// Pairs expressed as (vertex index in T1, vertex index in T2), sorted.
std::vector<std::pair<std::int64_t, std::int64_t>> vertex_pairs(const Matching& m, const MergeTree& t1,
                                                                const MergeTree& t2);

std::string matching_to_json(const Matching& m, const MergeTree& t1, const MergeTree& t2);

/// Result of a matcher on labelled trees.
struct TreeMatch {
    MatchKey key;
    double distance = 0.0;
    std::vector<std::pair<int, int>> pairs;  // sorted
};

// ---- matchers -------------------------------------------------------------

/// Constrained (disjoint subtrees to disjoint subtrees) unordered tree edit
/// distance with forced root pairing.
TreeMatch constrained_edit(const LabeledTree& t1, const LabeledTree& t2, const CostModel& model);
Matching constrained_edit_matching(const MergeTree& t1, const MergeTree& t2, const CostModel& model = {});

/// Edit distance on branch decomposition trees where deleting a branch
/// deletes its whole subtree. Costs are squared and summed, the distance is
/// the square root of the total.
TreeMatch wasserstein_branch_matching(const LabeledTree& b1, const LabeledTree& b2,
                                      const CostModel& model = {Norm::L2});
Matching wasserstein_matching(const MergeTree& t1, const MergeTree& t2, const CostModel& model = {Norm::L2});

/// Minimum over all branch decompositions of both trees of the cost of a
/// parent-preserving branch mapping.
Matching branch_mapping(const MergeTree& t1, const MergeTree& t2);

/// Path mapping under arc shrink/extend operations, with up to `la.k`
/// saddles contracted when aligning the subtrees below a matched node pair.
Matching path_mapping(const MergeTree& t1, const MergeTree& t2, LookAhead la = {});

Matching match_trees(const MergeTree& t1, const MergeTree& t2, Method method, LookAhead la = {});

// ---- brute force ------------------------------------------------------------

struct MappingConstraints {
    bool ancestor = true;     // ancestor relation preserved in both directions
    bool disjoint = false;    // disjoint subtrees map to disjoint subtrees
    bool collapse = false;    // unmatched nodes have unmatched subtrees
};

inline constexpr std::int64_t kBruteForceLimit = 64;

/// Exhaustive minimum over all partial bijections containing the root pair
/// and satisfying the constraints, under the same objective as the matchers.
/// Throws std::invalid_argument if |T1|*|T2| exceeds kBruteForceLimit.
TreeMatch brute_force_matching(const LabeledTree& t1, const LabeledTree& t2, const MappingConstraints& constraints,
                               const CostModel& model);
Matching brute_force_matching(const MergeTree& t1, const MergeTree& t2, const MappingConstraints& constraints,
                              const CostModel& model);

} // namespace mtb
