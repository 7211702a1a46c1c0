#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mtb/matching.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb {

/// Chain of nodes at consecutive time steps, starting at `start_step`.
struct TrackingPath {
    Method method = Method::ConstrainedEdit;
    int start_step = 0;
    std::vector<int> nodes;
    int length() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Maximal chains: a path starts at every node without an incoming pair and
/// follows outgoing pairs. Ordered by start step, then start node.
std::vector<TrackingPath> build_tracking_paths(const std::vector<MergeTree>& trees,
                                               const std::vector<Matching>& matchings, Method method);

struct MatchedCounts {
    int pairs = 0;
    int total_nodes = 0;   // |V1| + |V2|
    int leaf_pairs = 0;    // pairs whose first node is a leaf
    int saddle_pairs = 0;  // all other pairs, including the root pair
};

MatchedCounts matched_counts(const Matching& m, const MergeTree& t1, const MergeTree& t2);

/// Length (node count) -> number of paths, for paths of at least min_length.
std::map<int, int> path_length_histogram(const std::vector<TrackingPath>& paths, int min_length);

using VertexPairs = std::vector<std::pair<std::int64_t, std::int64_t>>;

/// Sum over steps of |A_i \ B_i|, pairs compared by vertex index.
std::int64_t pairwise_difference(const std::vector<VertexPairs>& a, const std::vector<VertexPairs>& b);

struct SimilarityMatrix {
    std::vector<Method> methods;
    std::vector<std::vector<std::int64_t>> raw;
    /// Percentage of row-method pairs shared with the column method; empty
    /// when the row method has no pairs at all.
    std::vector<std::vector<std::optional<double>>> scaled;
};

/// results[m][i]: vertex pairs of method m between steps i and i+1.
SimilarityMatrix similarity_matrix(const std::vector<Method>& methods, const std::vector<std::vector<VertexPairs>>& results);

} // namespace mtb
