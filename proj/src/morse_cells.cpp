#include "mtb/merge_tree.hpp"

namespace mtb {

MorseCellMap morse_cells(const GridField& field, SweepDirection direction)
{
    const std::int64_t n = field.size();
    // A vertex flows to the neighbour visited last by the sweep, if that
    // neighbour comes after the vertex itself.
    std::vector<std::int64_t> next(static_cast<std::size_t>(n));
    for (std::int64_t v = 0; v < n; ++v) {
        std::int64_t best = v;
        for_each_neighbor(field.dims(), v, [&](std::int64_t u) {
            if (sweep_before(direction, field[u], u, field[best], best))
                best = u;
        });
        next[static_cast<std::size_t>(v)] = best;
    }

    MorseCellMap map;
    map.direction = direction;
    map.assignment.assign(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> stack;
    for (std::int64_t v = 0; v < n; ++v) {
        std::int64_t x = v;
        while (map.assignment[static_cast<std::size_t>(x)] < 0 && next[static_cast<std::size_t>(x)] != x) {
            stack.push_back(x);
            x = next[static_cast<std::size_t>(x)];
        }
        const std::int64_t target =
            map.assignment[static_cast<std::size_t>(x)] >= 0 ? map.assignment[static_cast<std::size_t>(x)] : x;
        map.assignment[static_cast<std::size_t>(x)] = target;
        for (std::int64_t s : stack)
            map.assignment[static_cast<std::size_t>(s)] = target;
        stack.clear();
    }
    return map;
}

} // namespace mtb
