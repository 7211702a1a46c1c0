#include "mtb/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mtb {

GridField::GridField(Dims dims, std::array<double, 3> spacing, std::vector<double> values)
    : dims_(dims), spacing_(spacing), values_(std::move(values))
{
    if (dims_.nx < 1 || dims_.ny < 1 || dims_.nz < 1)
        throw std::invalid_argument("grid dims must be positive");
    if (dims_.size() < 2)
        throw std::invalid_argument("grid must contain at least 2 vertices");
    if (static_cast<std::int64_t>(values_.size()) != dims_.size())
        throw std::invalid_argument("value count " + std::to_string(values_.size()) +
                                    " does not match dims product " + std::to_string(dims_.size()));
    for (double s : spacing_) {
        if (!std::isfinite(s) || s <= 0.0)
            throw std::invalid_argument("grid spacing must be finite and positive");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("non-finite value at vertex " + std::to_string(i));
    }
}

GridField::GridField(Dims dims, std::vector<double> values)
    : GridField(dims, {1.0, 1.0, 1.0}, std::move(values))
{
}

double GridField::min_value() const
{
    return *std::min_element(values_.begin(), values_.end());
}

double GridField::max_value() const
{
    return *std::max_element(values_.begin(), values_.end());
}

bool GridField::bitwise_equal(const GridField& other) const
{
    if (!(dims_ == other.dims_))
        return false;
    if (std::memcmp(spacing_.data(), other.spacing_.data(), sizeof(spacing_)) != 0)
        return false;
    return values_.size() == other.values_.size() &&
           std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

} // namespace mtb
