#include "mtb/tracking.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace mtb {

std::vector<TrackingPath> build_tracking_paths(const std::vector<MergeTree>& trees,
                                               const std::vector<Matching>& matchings, Method method)
{
    if (trees.empty() || matchings.size() + 1 != trees.size())
        throw std::invalid_argument("need one matching between each pair of consecutive trees");
    std::vector<std::vector<int>> next(trees.size()), incoming(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        next[i].assign(static_cast<std::size_t>(trees[i].size()), -1);
        incoming[i].assign(static_cast<std::size_t>(trees[i].size()), 0);
    }
    for (std::size_t i = 0; i < matchings.size(); ++i) {
        for (const auto& [a, b] : matchings[i].pairs) {
            next[i][static_cast<std::size_t>(a)] = b;
            incoming[i + 1][static_cast<std::size_t>(b)] = 1;
        }
    }
    std::vector<TrackingPath> paths;
    for (std::size_t s = 0; s < trees.size(); ++s) {
        for (int n = 0; n < trees[s].size(); ++n) {
            if (incoming[s][static_cast<std::size_t>(n)])
                continue;
            TrackingPath p;
            p.method = method;
            p.start_step = static_cast<int>(s);
            int cur = n;
            for (std::size_t i = s;; ++i) {
                p.nodes.push_back(cur);
                if (i + 1 >= trees.size() || next[i][static_cast<std::size_t>(cur)] < 0)
                    break;
                cur = next[i][static_cast<std::size_t>(cur)];
            }
            paths.push_back(std::move(p));
        }
    }
    return paths;
}

MatchedCounts matched_counts(const Matching& m, const MergeTree& t1, const MergeTree& t2)
{
    MatchedCounts c;
    c.pairs = static_cast<int>(m.pairs.size());
    c.total_nodes = t1.size() + t2.size();
    for (const auto& [a, b] : m.pairs) {
        if (t1.node(a).type == NodeType::Leaf)
            ++c.leaf_pairs;
        else
            ++c.saddle_pairs;
    }
    return c;
}

std::map<int, int> path_length_histogram(const std::vector<TrackingPath>& paths, int min_length)
{
    if (min_length < 1)
        throw std::invalid_argument("minimum path length must be at least 1");
    std::map<int, int> h;
    for (const auto& p : paths) {
        if (p.length() >= min_length)
            ++h[p.length()];
    }
    return h;
}

namespace {

VertexPairs sorted_unique(VertexPairs v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

std::int64_t pairwise_difference(const std::vector<VertexPairs>& a, const std::vector<VertexPairs>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("pairwise difference needs results over the same number of steps");
    std::int64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = sorted_unique(a[i]);
        const auto y = sorted_unique(b[i]);
        VertexPairs diff;
        std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(diff));
        total += static_cast<std::int64_t>(diff.size());
    }
    return total;
}

SimilarityMatrix similarity_matrix(const std::vector<Method>& methods, const std::vector<std::vector<VertexPairs>>& results)
{
    if (methods.size() < 2)
        throw std::invalid_argument("a similarity matrix needs at least two methods");
    if (results.size() != methods.size())
        throw std::invalid_argument("one result list per method expected");
    const std::size_t m = methods.size();
    SimilarityMatrix s;
    s.methods = methods;
    s.raw.assign(m, std::vector<std::int64_t>(m, 0));
    s.scaled.assign(m, std::vector<std::optional<double>>(m));
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t total = 0;
        for (const auto& step : results[i])
            total += static_cast<std::int64_t>(sorted_unique(step).size());
        for (std::size_t j = 0; j < m; ++j) {
            s.raw[i][j] = pairwise_difference(results[i], results[j]);
            if (total > 0)
                s.scaled[i][j] = 100.0 * static_cast<double>(total - s.raw[i][j]) / static_cast<double>(total);
        }
    }
    return s;
}

} // namespace mtb
