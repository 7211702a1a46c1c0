#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtb/errors.hpp"

namespace mtb {

struct Dims {
    std::int64_t nx = 1;
    std::int64_t ny = 1;
    std::int64_t nz = 1;

    std::int64_t size() const noexcept { return nx * ny * nz; }
    bool operator==(const Dims&) const = default;
};

/// Regular-grid scalar field, one time step. 2D fields use nz == 1.
/// Values are stored x-fastest. Immutable after construction.
class GridField {
public:
    GridField() = default;

    /// Throws std::invalid_argument when the invariants do not hold:
    /// size match, finite values, at least 2 samples along every axis
    /// with extent > 1 (and at least 2 samples in total).
    GridField(Dims dims, std::array<double, 3> spacing, std::vector<double> values);
    GridField(Dims dims, std::vector<double> values);

    const Dims& dims() const noexcept { return dims_; }
    const std::array<double, 3>& spacing() const noexcept { return spacing_; }
    std::span<const double> values() const noexcept { return values_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }
    double operator[](std::int64_t v) const { return values_[static_cast<std::size_t>(v)]; }

    std::int64_t index(std::int64_t x, std::int64_t y, std::int64_t z = 0) const noexcept
    {
        return x + dims_.nx * (y + dims_.ny * z);
    }
    std::array<std::int64_t, 3> coords(std::int64_t v) const noexcept
    {
        return {v % dims_.nx, (v / dims_.nx) % dims_.ny, v / (dims_.nx * dims_.ny)};
    }

    double min_value() const;
    double max_value() const;
    double range() const { return max_value() - min_value(); }

    /// Bitwise equality of dims, spacing and values.
    bool bitwise_equal(const GridField& other) const;

private:
    Dims dims_;
    std::array<double, 3> spacing_{1.0, 1.0, 1.0};
    std::vector<double> values_;
};

/// Freudenthal neighbourhood of a vertex: 6 neighbours in 2D, 14 in 3D,
/// fewer on the boundary. Calls fn(neighbour_index) for each.
template <class Fn>
void for_each_neighbor(const Dims& dims, std::int64_t v, Fn&& fn)
{
    static constexpr std::array<std::array<int, 3>, 14> kOffsets{{
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
        {1, 1, 0}, {-1, -1, 0}, {1, 0, 1}, {-1, 0, -1}, {0, 1, 1}, {0, -1, -1},
        {1, 1, 1}, {-1, -1, -1},
    }};
    const std::int64_t x = v % dims.nx;
    const std::int64_t y = (v / dims.nx) % dims.ny;
    const std::int64_t z = v / (dims.nx * dims.ny);
    for (const auto& o : kOffsets) {
        const std::int64_t X = x + o[0], Y = y + o[1], Z = z + o[2];
        if (X < 0 || Y < 0 || Z < 0 || X >= dims.nx || Y >= dims.ny || Z >= dims.nz)
            continue;
        fn(X + dims.nx * (Y + dims.ny * Z));
    }
}

/// Total order used everywhere ties matter: (value, index) lexicographic.
inline bool sos_less(double a, std::int64_t ia, double b, std::int64_t ib) noexcept
{
    return a < b || (a == b && ia < ib);
}

// ---- file format ---------------------------------------------------------

enum class FieldEncoding { Text, F64LE };

GridField load_field(const std::string& path);
GridField parse_field(std::span<const char> bytes);
void write_field(const GridField& field, const std::string& path, FieldEncoding encoding = FieldEncoding::F64LE);
std::string serialize_field(const GridField& field, FieldEncoding encoding = FieldEncoding::F64LE);

} // namespace mtb
