#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

#include "mtb/grid_field.hpp"
#include "mtb/matching.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb {

/// For every leaf of trees[0] (in node order), the number of steps over
/// which matchings keep it on the same vertex index.
std::vector<int> tracking_paths_by_index(const std::vector<MergeTree>& trees, const std::vector<Matching>& matchings);

/// Sum of lengths divided by t times the number of leaves.
double stability_score(const std::vector<int>& lens, int t);

struct StabilityReport {
    Method method = Method::ConstrainedEdit;
    double score = 0.0;
    std::vector<int> lens;
    int t = 0;
    int leaf_count = 0;
};

struct StabilityConfig {
    std::vector<double> taus{0.01, 0.02, 0.05, 0.10, 0.15};
    double eps_max = 0.05;
    int t = 40;
    int repeats = 10;
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    LookAhead look_ahead{};
    double simplify = 0.01;   // fraction of each field's own range
    std::uint64_t seed = 0;
};

/// Trees of a field sequence after simplification at `fraction` of each
/// field's own range.
std::vector<MergeTree> series_trees(const std::vector<GridField>& fields, SweepDirection dir, double fraction);

/// One (tau, repeat) cell: generates the series and scores every method.
std::vector<StabilityReport> stability_cell(const GridField& base, SweepDirection dir, const StabilityConfig& config,
                                            std::size_t tau_index, int repeat);

struct StabilityRow {
    Method method = Method::ConstrainedEdit;
    double tau = 0.0;
    int repeat = 0;
    double score = 0.0;
};

struct StabilityAggregate {
    Method method = Method::ConstrainedEdit;
    double tau = 0.0;
    double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

/// Linear-interpolation quantile of unsorted samples, q in [0, 1].
double quantile(std::vector<double> samples, double q);

/// Aggregates grouped by (method, tau) in the order methods, then taus,
/// first appear in `rows`.
std::vector<StabilityAggregate> aggregate_scores(const std::vector<StabilityRow>& rows);

/// Full cross product, run sequentially. Rows are ordered by method, tau, repeat.
std::vector<StabilityRow> stability_experiment(const GridField& base, SweepDirection dir, const StabilityConfig& config);

} // namespace mtb
