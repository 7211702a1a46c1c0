#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtb {

/// One box of a box/whisker chart. Boxes sharing `group` are drawn side by
/// side, one colour per `series`.
struct BoxStats {
    std::string group;
    std::string series;
    double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

/// Value axis spans [0, 1].
std::string svg_box_plot(const std::vector<BoxStats>& boxes, const std::string& title);

/// Square matrix of percentages in [0, 100]; missing cells are hatched grey.
std::string svg_heat_map(const std::vector<std::string>& labels,
                         const std::vector<std::vector<std::optional<double>>>& cells, const std::string& title);

struct BarGroup {
    std::string label;
    std::vector<double> values;  // stacked bottom to top
};

std::string svg_stacked_bars(const std::vector<BarGroup>& bars, const std::vector<std::string>& series,
                             const std::string& title);

std::string svg_histogram(const std::map<int, int>& bins, const std::string& title);

} // namespace mtb
