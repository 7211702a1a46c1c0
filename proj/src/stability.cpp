#include "mtb/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mtb/noise.hpp"
#include "mtb/rng.hpp"

namespace mtb {

std::vector<int> tracking_paths_by_index(const std::vector<MergeTree>& trees, const std::vector<Matching>& matchings)
{
    if (trees.empty() || matchings.size() + 1 != trees.size())
        throw std::invalid_argument("need one matching between each pair of consecutive trees");
    std::vector<std::vector<int>> next(matchings.size());
    for (std::size_t i = 0; i < matchings.size(); ++i) {
        next[i].assign(static_cast<std::size_t>(trees[i].size()), -1);
        for (const auto& [a, b] : matchings[i].pairs)
            next[i][static_cast<std::size_t>(a)] = b;
    }
    std::vector<int> lens;
    for (int leaf : trees[0].leaves()) {
        const std::int64_t vertex = trees[0].vertex(leaf);
        int len = 1;
        int cur = leaf;
        for (std::size_t i = 0; i < matchings.size(); ++i) {
            const int nx = next[i][static_cast<std::size_t>(cur)];
            if (nx < 0 || trees[i + 1].vertex(nx) != vertex)
                break;
            cur = nx;
            ++len;
        }
        lens.push_back(len);
    }
    return lens;
}

double stability_score(const std::vector<int>& lens, int t)
{
    if (lens.empty())
        throw std::invalid_argument("stability score of an empty leaf set");
    if (t < 1)
        throw std::invalid_argument("series length must be positive");
    std::int64_t sum = 0;
    for (int l : lens) {
        if (l < 1 || l > t)
            throw std::invalid_argument("path length " + std::to_string(l) + " outside [1, t]");
        sum += l;
    }
    return static_cast<double>(sum) / (static_cast<double>(t) * static_cast<double>(lens.size()));
}

std::vector<MergeTree> series_trees(const std::vector<GridField>& fields, SweepDirection dir, double fraction)
{
    std::vector<MergeTree> trees;
    trees.reserve(fields.size());
    for (const auto& f : fields) {
        MergeTree t = compute_merge_tree(f, dir);
        const double range = f.range();
        trees.push_back(range > 0.0 ? simplify(t, fraction, range) : std::move(t));
    }
    return trees;
}

std::vector<StabilityReport> stability_cell(const GridField& base, SweepDirection dir, const StabilityConfig& config,
                                            std::size_t tau_index, int repeat)
{
    const double tau = config.taus.at(tau_index);
    const std::uint64_t seed = derive_seed(config.seed, tau_index, static_cast<std::uint64_t>(repeat));
    const auto series = epsilon_series(base, dir, tau, config.eps_max, config.t, seed);
    const auto trees = series_trees(series.fields, dir, config.simplify);

    std::vector<StabilityReport> out;
    for (Method m : config.methods) {
        std::vector<Matching> matchings;
        matchings.reserve(trees.size() - 1);
        for (std::size_t i = 0; i + 1 < trees.size(); ++i)
            matchings.push_back(match_trees(trees[i], trees[i + 1], m, config.look_ahead));
        StabilityReport r;
        r.method = m;
        r.t = config.t;
        r.lens = tracking_paths_by_index(trees, matchings);
        r.leaf_count = static_cast<int>(r.lens.size());
        r.score = stability_score(r.lens, config.t);
        out.push_back(std::move(r));
    }
    return out;
}

double quantile(std::vector<double> samples, double q)
{
    if (samples.empty())
        throw std::invalid_argument("quantile of an empty sample");
    std::sort(samples.begin(), samples.end());
    const double h = q * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

std::vector<StabilityAggregate> aggregate_scores(const std::vector<StabilityRow>& rows)
{
    std::vector<Method> methods;
    std::vector<double> taus;
    for (const auto& r : rows) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        if (std::find(taus.begin(), taus.end(), r.tau) == taus.end())
            taus.push_back(r.tau);
    }
    std::vector<StabilityAggregate> out;
    for (Method m : methods) {
        for (double tau : taus) {
            std::vector<double> s;
            for (const auto& r : rows)
                if (r.method == m && r.tau == tau)
                    s.push_back(r.score);
            if (s.empty())
                continue;
            StabilityAggregate a;
            a.method = m;
            a.tau = tau;
            a.median = quantile(s, 0.5);
            a.q1 = quantile(s, 0.25);
            a.q3 = quantile(s, 0.75);
            a.min = *std::min_element(s.begin(), s.end());
            a.max = *std::max_element(s.begin(), s.end());
            out.push_back(a);
        }
    }
    return out;
}

std::vector<StabilityRow> stability_experiment(const GridField& base, SweepDirection dir, const StabilityConfig& config)
{
    if (config.methods.empty())
        throw std::invalid_argument("no methods selected");
    if (config.repeats < 1)
        throw std::invalid_argument("repeats must be positive");
    std::map<std::pair<std::size_t, int>, std::vector<StabilityReport>> cells;
    for (std::size_t ti = 0; ti < config.taus.size(); ++ti)
        for (int r = 0; r < config.repeats; ++r)
            cells[{ti, r}] = stability_cell(base, dir, config, ti, r);
    std::vector<StabilityRow> rows;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
        for (std::size_t ti = 0; ti < config.taus.size(); ++ti)
            for (int r = 0; r < config.repeats; ++r)
                rows.push_back({config.methods[mi], config.taus[ti], r, cells[{ti, r}][mi].score});
    return rows;
}

} // namespace mtb
