#include <algorithm>
#include <iterator>
#include <set>

#include "doctest.h"
#include "mtb/generators.hpp"
#include "mtb/noise.hpp"
#include "mtb/stability.hpp"
#include "mtb/tracking.hpp"
#include "support/fixtures.hpp"

using namespace mtb;

namespace {

/// Two leaves (vertices 10, 11) merging at the root (vertex 12).
MergeTree cherry()
{
    return fixture::build_tree({{12, 1.0, -1}, {10, 0.0, 0}, {11, 0.5, 0}}, SweepDirection::Join);
}

int node_of(const MergeTree& t, std::int64_t vertex)
{
    for (int i = 0; i < t.size(); ++i)
        if (t.vertex(i) == vertex)
            return i;
    return -1;
}

Matching by_vertex(const MergeTree& t1, const MergeTree& t2, const std::vector<std::pair<std::int64_t, std::int64_t>>& vp)
{
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [a, b] : vp)
        pairs.push_back({node_of(t1, a), node_of(t2, b)});
    return make_matching(Method::PathMapping, 0.0, pairs, t1.size(), t2.size());
}

TrackingPath planted(int length)
{
    return {Method::PathMapping, 0, std::vector<int>(static_cast<std::size_t>(length), 0)};
}

VertexPairs step_pairs(std::initializer_list<std::pair<std::int64_t, std::int64_t>> p)
{
    return VertexPairs(p);
}

/// Independent recount of the pairwise difference by set difference.
std::int64_t recount(const std::vector<VertexPairs>& a, const std::vector<VertexPairs>& b)
{
    std::int64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::set<std::pair<std::int64_t, std::int64_t>> sa(a[i].begin(), a[i].end()), sb(b[i].begin(), b[i].end());
        std::vector<std::pair<std::int64_t, std::int64_t>> diff;
        std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(diff));
        n += static_cast<std::int64_t>(diff.size());
    }
    return n;
}

} // namespace

TEST_CASE("identity matchings give one full-length path per node")
{
    const std::vector<MergeTree> trees(5, fixture::horizontal_first());
    std::vector<Matching> ms;
    for (int i = 0; i < 4; ++i) {
        std::vector<std::pair<int, int>> pairs;
        for (int n = 0; n < trees[0].size(); ++n)
            pairs.push_back({n, n});
        ms.push_back(make_matching(Method::PathMapping, 0.0, pairs, trees[0].size(), trees[0].size()));
    }
    const auto paths = build_tracking_paths(trees, ms, Method::PathMapping);
    CHECK(paths.size() == static_cast<std::size_t>(trees[0].size()));
    for (const auto& p : paths)
        CHECK(p.length() == 5);
    const auto hist = path_length_histogram(paths, 1);
    CHECK(hist == std::map<int, int>{{5, 6}});
}

TEST_CASE("empty matchings give one single-node path per node and step")
{
    const std::vector<MergeTree> trees(3, cherry());
    const std::vector<Matching> ms(2, make_matching(Method::ConstrainedEdit, 0.0, {}, 3, 3));
    const auto paths = build_tracking_paths(trees, ms, Method::ConstrainedEdit);
    CHECK(paths.size() == 9);
    for (const auto& p : paths)
        CHECK(p.length() == 1);
    CHECK(matched_counts(ms[0], trees[0], trees[1]).pairs == 0);
}

TEST_CASE("hand-enumerated paths across a break")
{
    const std::vector<MergeTree> trees(3, cherry());
    // Step 0 -> 1: identity. Step 1 -> 2: leaf 10 moves to 11, leaf 11 ends.
    const std::vector<Matching> ms{by_vertex(trees[0], trees[1], {{10, 10}, {11, 11}, {12, 12}}),
                                   by_vertex(trees[1], trees[2], {{10, 11}, {12, 12}})};
    const auto paths = build_tracking_paths(trees, ms, Method::PathMapping);
    std::set<std::vector<std::int64_t>> got;
    for (const auto& p : paths) {
        std::vector<std::int64_t> v{p.start_step};
        for (std::size_t i = 0; i < p.nodes.size(); ++i)
            v.push_back(trees[static_cast<std::size_t>(p.start_step) + i].vertex(p.nodes[i]));
        got.insert(v);
    }
    const std::set<std::vector<std::int64_t>> expected{
        {0, 10, 10, 11}, {0, 11, 11}, {0, 12, 12, 12}, {2, 10}};
    CHECK(got == expected);

    int edges = 0;
    for (const auto& p : paths)
        edges += p.length() - 1;
    CHECK(edges == static_cast<int>(ms[0].pairs.size() + ms[1].pairs.size()));
    CHECK_THROWS_AS(build_tracking_paths(trees, {ms[0]}, Method::PathMapping), std::invalid_argument);
}

TEST_CASE("matched counts by node type")
{
    const auto t1 = fixture::horizontal_first();
    const auto t2 = fixture::horizontal_second();
    std::vector<std::pair<int, int>> id;
    for (int n = 0; n < t1.size(); ++n)
        id.push_back({n, n});
    const auto full = matched_counts(make_matching(Method::PathMapping, 0.0, id, t1.size(), t1.size()), t1, t1);
    CHECK(full.pairs == t1.size());
    CHECK(full.total_nodes == 2 * t1.size());

    const auto m = path_mapping(t1, t2, {4});
    const auto c = matched_counts(m, t1, t2);
    CHECK(c.leaf_pairs == 3);
    CHECK(c.saddle_pairs - 1 <= 2);
    CHECK(c.pairs == c.leaf_pairs + c.saddle_pairs);
    CHECK(c.total_nodes == 12);
}

TEST_CASE("path length histogram")
{
    const std::vector<TrackingPath> full{planted(7), planted(7)};
    CHECK(path_length_histogram(full, 1) == std::map<int, int>{{7, 2}});
    CHECK(path_length_histogram(full, 8).empty());
    const std::vector<TrackingPath> mixed{planted(3), planted(10), planted(10), planted(25)};
    CHECK(path_length_histogram(mixed, 10) == std::map<int, int>{{10, 2}, {25, 1}});
}

TEST_CASE("pairwise difference counts pairs missing from the other result")
{
    const std::vector<VertexPairs> a{step_pairs({{1, 1}, {2, 2}}), step_pairs({{1, 1}, {3, 3}}), step_pairs({{1, 1}, {4, 4}})};
    const std::vector<VertexPairs> b{step_pairs({{1, 1}}), step_pairs({{1, 1}}), step_pairs({{1, 1}})};
    CHECK(pairwise_difference(a, a) == 0);
    CHECK(pairwise_difference(a, b) == 3);
    CHECK(pairwise_difference(b, a) == 0);
    CHECK_THROWS_AS(pairwise_difference(a, std::vector<VertexPairs>(b.begin(), b.end() - 1)), std::invalid_argument);
}

TEST_CASE("similarity matrix extremes")
{
    const std::vector<Method> methods{Method::ConstrainedEdit, Method::PathMapping};
    const std::vector<VertexPairs> a{step_pairs({{1, 1}, {2, 2}})};
    const std::vector<VertexPairs> b{step_pairs({{5, 5}})};
    const auto same = similarity_matrix(methods, {a, a});
    for (const auto& row : same.scaled)
        for (const auto& cell : row)
            CHECK(cell == 100.0);
    const auto disjoint = similarity_matrix(methods, {a, b});
    CHECK(disjoint.scaled[0][1] == 0.0);
    CHECK(disjoint.scaled[1][0] == 0.0);
    CHECK(disjoint.raw[0][0] == 0);
    CHECK(disjoint.raw[0][1] == 2);
    const auto empty = similarity_matrix(methods, {a, {VertexPairs{}}});
    CHECK_FALSE(empty.scaled[1][0].has_value());
    CHECK_FALSE(empty.scaled[1][1].has_value());
    CHECK(empty.scaled[0][1] == 0.0);
}

TEST_CASE("similarity of the four methods on a noisy series agrees with a recount")
{
    const auto series = epsilon_series(vortex_street_field(), SweepDirection::Join, 0.05, 0.05, 20, 12);
    const auto trees = series_trees(series.fields, SweepDirection::Join, 0.01);
    const std::vector<Method> methods(std::begin(kAllMethods), std::end(kAllMethods));
    std::vector<std::vector<VertexPairs>> results(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m)
        for (std::size_t i = 0; i + 1 < trees.size(); ++i)
            results[m].push_back(vertex_pairs(match_trees(trees[i], trees[i + 1], methods[m]), trees[i], trees[i + 1]));
    const auto sim = similarity_matrix(methods, results);
    for (std::size_t i = 0; i < methods.size(); ++i) {
        std::int64_t total = 0;
        for (const auto& step : results[i])
            total += static_cast<std::int64_t>(step.size());
        for (std::size_t j = 0; j < methods.size(); ++j) {
            const auto diff = recount(results[i], results[j]);
            CHECK(sim.raw[i][j] == diff);
            REQUIRE(sim.scaled[i][j].has_value());
            CHECK(*sim.scaled[i][j] == doctest::Approx(100.0 * static_cast<double>(total - diff) / static_cast<double>(total)));
            for (std::size_t s = 0; s < results[i].size(); ++s) {
                const std::set<std::pair<std::int64_t, std::int64_t>> a(results[i][s].begin(), results[i][s].end());
                const std::set<std::pair<std::int64_t, std::int64_t>> b(results[j][s].begin(), results[j][s].end());
                std::vector<std::pair<std::int64_t, std::int64_t>> inter;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
                CHECK(recount({results[i][s]}, {results[j][s]}) + static_cast<std::int64_t>(inter.size()) ==
                      static_cast<std::int64_t>(a.size()));
            }
        }
        CHECK(sim.raw[i][i] == 0);
        CHECK(sim.scaled[i][i] == 100.0);
    }
}
