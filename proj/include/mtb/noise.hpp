#pragma once

#include <cstdint>
#include <vector>

#include "mtb/grid_field.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb {

struct NoiseSpec {
    double tau = 0.01;      // fraction of vertices perturbed, in (0, 1]
    double epsilon = 0.0;   // amplitude as a fraction of the data range, in [0, 1]
    std::uint64_t seed = 0;
};

struct NoisyField {
    GridField field;
    std::int64_t perturbed = 0;
    bool degenerate = false;  // tau selected no vertex; field equals the input
};

/// Perturbs round(tau * N) randomly chosen non-extremum vertices by a
/// uniform offset in [-epsilon*R, epsilon*R] and clamps the result strictly
/// below (Split) or above (Join) the extremum of the vertex's Morse cell and
/// every extremum adjacent to it, so all extrema of `base` stay extrema.
/// Throws std::invalid_argument for tau outside (0, 1] or epsilon outside [0, 1].
NoisyField inject_noise(const GridField& base, SweepDirection dir, const NoiseSpec& spec);

struct EpsilonSeries {
    GridField base;
    std::vector<GridField> fields;
    std::vector<double> epsilons;
    double tau = 0.0;
    double eps_max = 0.0;
    std::uint64_t seed = 0;
    int size() const noexcept { return static_cast<int>(fields.size()); }
};

/// t fields with evenly spaced noise levels from 0 to eps_max. Step i uses
/// the seed derive_seed(seed, i); step 0 is the base field itself.
EpsilonSeries epsilon_series(const GridField& base, SweepDirection dir, double tau, double eps_max, int t,
                             std::uint64_t seed);

/// Noise level of step i of a t-step series.
double series_epsilon(double eps_max, int t, int i);

} // namespace mtb
