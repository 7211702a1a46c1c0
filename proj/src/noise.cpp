#include "mtb/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtb/rng.hpp"

namespace mtb {

NoisyField inject_noise(const GridField& base, SweepDirection dir, const NoiseSpec& spec)
{
    if (!(spec.tau > 0.0 && spec.tau <= 1.0))
        throw std::invalid_argument("tau must lie in (0, 1], got " + std::to_string(spec.tau));
    if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0, 1], got " + std::to_string(spec.epsilon));
    if (spec.epsilon == 0.0)
        return {base, 0, false};

    const std::int64_t n = base.size();
    const MorseCellMap cells = morse_cells(base, dir);
    std::vector<std::int64_t> candidates;
    std::vector<char> extremum(static_cast<std::size_t>(n), 0);
    for (std::int64_t v = 0; v < n; ++v) {
        if (cells.assignment[static_cast<std::size_t>(v)] == v)
            extremum[static_cast<std::size_t>(v)] = 1;
        else
            candidates.push_back(v);
    }
    const auto wanted = static_cast<std::int64_t>(std::llround(spec.tau * static_cast<double>(n)));
    const std::int64_t count = std::min<std::int64_t>(wanted, static_cast<std::int64_t>(candidates.size()));
    if (count <= 0)
        return {base, 0, true};

    Rng rng(spec.seed);
    for (std::int64_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(candidates.size()) -
                                                               static_cast<std::uint64_t>(i)));
        std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
    }

    const double amp = spec.epsilon * base.range();
    const bool split = dir == SweepDirection::Split;
    const double away = split ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    std::vector<double> values(base.values().begin(), base.values().end());
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t p = candidates[static_cast<std::size_t>(i)];
        double bound = base[cells.assignment[static_cast<std::size_t>(p)]];
        for_each_neighbor(base.dims(), p, [&](std::int64_t u) {
            if (extremum[static_cast<std::size_t>(u)])
                bound = split ? std::min(bound, base[u]) : std::max(bound, base[u]);
        });
        const double limit = std::nextafter(bound, away);
        double x = base[p] + rng.uniform(-amp, amp);
        x = split ? std::min(x, limit) : std::max(x, limit);
        values[static_cast<std::size_t>(p)] = x;
    }
    return {GridField(base.dims(), base.spacing(), std::move(values)), count, false};
}

double series_epsilon(double eps_max, int t, int i)
{
    return i == t - 1 ? eps_max : eps_max * static_cast<double>(i) / static_cast<double>(t - 1);
}

EpsilonSeries epsilon_series(const GridField& base, SweepDirection dir, double tau, double eps_max, int t,
                             std::uint64_t seed)
{
    if (t < 2)
        throw std::invalid_argument("an epsilon series needs at least 2 steps");
    if (!(eps_max >= 0.0 && eps_max <= 1.0))
        throw std::invalid_argument("eps_max must lie in [0, 1]");
    EpsilonSeries s;
    s.base = base;
    s.tau = tau;
    s.eps_max = eps_max;
    s.seed = seed;
    for (int i = 0; i < t; ++i) {
        const double eps = series_epsilon(eps_max, t, i);
        s.epsilons.push_back(eps);
        if (i == 0)
            s.fields.push_back(base);
        else
            s.fields.push_back(inject_noise(base, dir, {tau, eps, derive_seed(seed, static_cast<std::uint64_t>(i))}).field);
    }
    return s;
}

} // namespace mtb
