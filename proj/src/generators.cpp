#include "mtb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtb/rng.hpp"

namespace mtb {

GridField gaussian_mixture(Dims dims, const std::vector<GaussianPeakSpec>& peaks)
{
    if (peaks.empty())
        throw std::invalid_argument("gaussian_mixture needs at least one peak");
    for (const auto& p : peaks) {
        if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
            throw std::invalid_argument("gaussian peak sigma must be positive");
    }
    std::vector<GaussianPeakSpec> sorted = peaks;
    std::sort(sorted.begin(), sorted.end(), [](const GaussianPeakSpec& a, const GaussianPeakSpec& b) {
        if (a.center != b.center)
            return a.center < b.center;
        if (a.height != b.height)
            return a.height < b.height;
        return a.sigma < b.sigma;
    });

    std::vector<double> values(static_cast<std::size_t>(dims.size()), 0.0);
    std::size_t v = 0;
    for (std::int64_t z = 0; z < dims.nz; ++z) {
        for (std::int64_t y = 0; y < dims.ny; ++y) {
            for (std::int64_t x = 0; x < dims.nx; ++x, ++v) {
                double sum = 0.0;
                for (const auto& p : sorted) {
                    const double dx = static_cast<double>(x) - p.center[0];
                    const double dy = static_cast<double>(y) - p.center[1];
                    const double dz = static_cast<double>(z) - p.center[2];
                    sum += p.height * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * p.sigma * p.sigma));
                }
                values[v] = sum;
            }
        }
    }
    return GridField(dims, std::move(values));
}

namespace {

// Base layout in normalised [0,1]^2 coordinates.
struct BasePeak {
    double x, y, height;
    std::vector<double> sub_angles_deg;
};

constexpr double kPeakSigma = 0.10;
constexpr double kSubOffset = 2.2;       // in units of the parent sigma
constexpr double kSubHeight = 0.5;       // fraction of the parent height
constexpr double kSubSigma = 0.4;        // fraction of the parent sigma

} // namespace

InstabilityField instability_field(const PerturbationSpec& perturbation, std::int64_t grid_size)
{
    if (grid_size < 8)
        throw std::invalid_argument("instability field grid must be at least 8x8");
    const std::vector<BasePeak> base{
        {0.25, 0.28, 1.00, {0.0, 180.0}},
        {0.75, 0.30, 0.98, {90.0, 210.0, 330.0}},
        {0.50, 0.74, 0.99, {}},
    };

    Rng rng(perturbation.seed);
    const double a = perturbation.amplitude;
    auto jitter = [&](double x) { return a == 0.0 ? x : x + rng.uniform(-a, a); };

    const double scale = static_cast<double>(grid_size - 1);
    std::vector<GaussianPeakSpec> peaks;
    InstabilityField out;
    int id = 0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        const auto& b = base[k];
        const double cx = jitter(b.x), cy = jitter(b.y), h = jitter(b.height), s = jitter(kPeakSigma);
        peaks.push_back({{cx * scale, cy * scale, 0.0}, h, s * scale});
        out.features.push_back({id++, -1, {cx * scale, cy * scale, 0.0}});
    }
    for (std::size_t k = 0; k < base.size(); ++k) {
        const auto& b = base[k];
        for (double deg : b.sub_angles_deg) {
            const double t = deg * std::numbers::pi / 180.0;
            const double sx = jitter(b.x + kSubOffset * kPeakSigma * std::cos(t));
            const double sy = jitter(b.y + kSubOffset * kPeakSigma * std::sin(t));
            const double sh = jitter(kSubHeight * b.height);
            const double ss = jitter(kSubSigma * kPeakSigma);
            peaks.push_back({{sx * scale, sy * scale, 0.0}, sh, ss * scale});
            out.features.push_back({id++, static_cast<int>(k), {sx * scale, sy * scale, 0.0}});
        }
    }
    out.field = gaussian_mixture({grid_size, grid_size, 1}, peaks);
    return out;
}

GridField vortex_street_field(Dims dims, int vortices_per_row, double ripple)
{
    if (vortices_per_row < 1)
        throw std::invalid_argument("vortex street needs at least one vortex per row");
    const double sx = static_cast<double>(dims.nx - 1);
    const double sy = static_cast<double>(dims.ny - 1);
    std::vector<GaussianPeakSpec> wells;
    for (int row = 0; row < 2; ++row) {
        for (int k = 0; k < vortices_per_row; ++k) {
            const double x = (k + 0.3 + 0.5 * row) / vortices_per_row;
            const double y = 0.3 + 0.4 * row;
            const double depth = 1.0 - 0.07 * ((3 * k + 5 * row) % 7) / 6.0;
            const double sigma = 0.28 / vortices_per_row;
            wells.push_back({{x * sx, y * sy, 0.0}, -depth, sigma * sx});
        }
    }
    const GridField mix = gaussian_mixture(dims, wells);
    std::vector<double> values(mix.values().begin(), mix.values().end());
    for (std::int64_t v = 0; v < mix.size(); ++v) {
        const auto c = mix.coords(v);
        const double x = static_cast<double>(c[0]), y = static_cast<double>(c[1]);
        values[static_cast<std::size_t>(v)] += 1.0 + 0.15 * x / sx + 0.05 * y / sy +
                                               ripple * std::sin(0.8 * x + 0.37 * y) * std::cos(0.664 * y - 0.21 * x);
    }
    return GridField(dims, std::move(values));
}

} // namespace mtb
