#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mtb/grid_field.hpp"

namespace mtb {

struct GaussianPeakSpec {
    std::array<double, 3> center{};  // grid coordinates
    double height = 1.0;
    double sigma = 1.0;              // grid units, > 0
};

struct PerturbationSpec {
    double amplitude = 0.01;
    std::uint64_t seed = 0;
};

/// Sum of Gaussians sampled at integer grid coordinates. The peak list is
/// summed in a canonical order, so the result does not depend on the order
/// of `peaks`. Throws std::invalid_argument for an empty list or sigma <= 0.
GridField gaussian_mixture(Dims dims, const std::vector<GaussianPeakSpec>& peaks);

/// One labelled feature of the three-peak instability field.
struct InstabilityFeature {
    int id = 0;
    int parent_peak = -1;          // -1 for the three main peaks
    std::array<double, 3> center{}; // grid coordinates after perturbation
};

struct InstabilityField {
    GridField field;
    std::vector<InstabilityFeature> features;  // 3 peaks, then 2 + 3 sub-features
};

inline constexpr std::int64_t kInstabilityGridSize = 64;

/// Three similar Gaussian peaks; peak 0 carries two sub-features, peak 1
/// three. Every centre coordinate, height and sigma (in normalised units,
/// domain mapped to [0,1]) is shifted by an independent uniform draw in
/// [-amplitude, amplitude]. Amplitude 0 yields the unperturbed base field.
InstabilityField instability_field(const PerturbationSpec& perturbation,
                                   std::int64_t grid_size = kInstabilityGridSize);

/// Convenience overload with the default 1% amplitude.
inline InstabilityField instability_field(std::uint64_t seed)
{
    return instability_field(PerturbationSpec{0.01, seed});
}

/// Smooth stand-in for a velocity-magnitude slice of a vortex street: two
/// staggered rows of wells (minima) of slightly varying depth on a gentle
/// background ramp, overlaid with a low-amplitude ripple that adds shallow
/// minima. Deterministic; intended for join-tree experiments.
GridField vortex_street_field(Dims dims = {48, 32, 1}, int vortices_per_row = 4, double ripple = 0.08);

} // namespace mtb
