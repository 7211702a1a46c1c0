#include "mtb/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace mtb {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string open_svg(const std::string& title)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
           std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " + std::to_string(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n" + "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           "<text x=\"" + num(kWidth / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
           "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke)
{
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\"/>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none",
                 const std::string& cls = "")
{
    return "<rect" + (cls.empty() ? std::string() : " class=\"" + cls + "\"") + " x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle")
{
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

/// Left axis with ticks for [0, top] mapped onto the plot area.
std::string value_axis(double top, int ticks)
{
    std::string out = line(kLeft, kTop, kLeft, kHeight - kBottom, "black");
    const double h = kHeight - kTop - kBottom;
    for (int i = 0; i <= ticks; ++i) {
        const double v = top * i / ticks;
        const double y = kHeight - kBottom - h * i / ticks;
        out += line(kLeft - 4, y, kLeft, y, "black");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        out += text(kLeft - 6, y + 4, buf, "end");
    }
    out += line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
    return out;
}

std::string legend(const std::vector<std::string>& series)
{
    std::string out;
    double x = kLeft;
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += rect(x, kHeight - 22, 10, 10, kPalette[i % std::size(kPalette)]);
        out += text(x + 14, kHeight - 13, series[i], "start");
        x += 110;
    }
    return out;
}

} // namespace

std::string svg_box_plot(const std::vector<BoxStats>& boxes, const std::string& title)
{
    std::vector<std::string> groups, series;
    for (const auto& b : boxes) {
        if (std::find(groups.begin(), groups.end(), b.group) == groups.end())
            groups.push_back(b.group);
        if (std::find(series.begin(), series.end(), b.series) == series.end())
            series.push_back(b.series);
    }
    std::string out = open_svg(title) + value_axis(1.0, 5);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto y = [&](double v) { return kHeight - kBottom - plot_h * std::clamp(v, 0.0, 1.0); };
    const double group_w = groups.empty() ? plot_w : plot_w / static_cast<double>(groups.size());
    const double box_w = series.empty() ? 0.0 : group_w * 0.8 / static_cast<double>(series.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double gx = kLeft + group_w * static_cast<double>(g);
        out += text(gx + group_w / 2, kHeight - kBottom + 16, groups[g]);
        for (const auto& b : boxes) {
            if (b.group != groups[g])
                continue;
            const auto s = static_cast<std::size_t>(std::find(series.begin(), series.end(), b.series) - series.begin());
            const double x = gx + group_w * 0.1 + box_w * static_cast<double>(s);
            const double cx = x + box_w / 2;
            const std::string colour = kPalette[s % std::size(kPalette)];
            out += line(cx, y(b.max), cx, y(b.q3), "black");
            out += line(cx, y(b.q1), cx, y(b.min), "black");
            out += line(x + box_w * 0.25, y(b.max), x + box_w * 0.75, y(b.max), "black");
            out += line(x + box_w * 0.25, y(b.min), x + box_w * 0.75, y(b.min), "black");
            out += rect(x + box_w * 0.1, y(b.q3), box_w * 0.8, std::max(0.0, y(b.q1) - y(b.q3)), colour, "black", "box");
            out += line(x + box_w * 0.1, y(b.median), x + box_w * 0.9, y(b.median), "black");
        }
    }
    out += legend(series);
    out += "</svg>\n";
    return out;
}

std::string svg_heat_map(const std::vector<std::string>& labels,
                         const std::vector<std::vector<std::optional<double>>>& cells, const std::string& title)
{
    std::string out = open_svg(title);
    const std::size_t n = labels.size();
    const double size = std::min(kWidth - kLeft - 40.0 - kRight, kHeight - kTop - kBottom);
    const double cell = n == 0 ? 0.0 : size / static_cast<double>(n);
    const double x0 = kLeft + 40.0, y0 = kTop;
    for (std::size_t i = 0; i < n; ++i) {
        out += text(x0 - 6, y0 + cell * (static_cast<double>(i) + 0.5) + 4, labels[i], "end");
        out += text(x0 + cell * (static_cast<double>(i) + 0.5), y0 + size + 16, labels[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = x0 + cell * static_cast<double>(j);
            const double yy = y0 + cell * static_cast<double>(i);
            const auto& v = cells.at(i).at(j);
            if (!v) {
                out += rect(x, yy, cell, cell, "#cccccc", "white", "missing");
                out += text(x + cell / 2, yy + cell / 2 + 4, "n/a");
                continue;
            }
            const double t = std::clamp(*v / 100.0, 0.0, 1.0);
            char fill[16];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", static_cast<int>(255 - 200 * t),
                          static_cast<int>(255 - 120 * t), 255);
            out += rect(x, yy, cell, cell, fill, "white", "cell");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.1f%%", *v);
            out += text(x + cell / 2, yy + cell / 2 + 4, buf);
        }
    }
    out += "</svg>\n";
    return out;
}

std::string svg_stacked_bars(const std::vector<BarGroup>& bars, const std::vector<std::string>& series,
                             const std::string& title)
{
    double top = 0.0;
    for (const auto& b : bars) {
        double sum = 0.0;
        for (double v : b.values)
            sum += v;
        top = std::max(top, sum);
    }
    if (top <= 0.0)
        top = 1.0;
    std::string out = open_svg(title) + value_axis(top, 4);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double slot = bars.empty() ? plot_w : plot_w / static_cast<double>(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double x = kLeft + slot * static_cast<double>(i) + slot * 0.2;
        double base = kHeight - kBottom;
        for (std::size_t s = 0; s < bars[i].values.size(); ++s) {
            const double h = plot_h * bars[i].values[s] / top;
            out += rect(x, base - h, slot * 0.6, h, kPalette[s % std::size(kPalette)], "none", "bar");
            base -= h;
        }
        out += text(x + slot * 0.3, kHeight - kBottom + 16, bars[i].label);
    }
    out += legend(series);
    out += "</svg>\n";
    return out;
}

std::string svg_histogram(const std::map<int, int>& bins, const std::string& title)
{
    int top = 1;
    for (const auto& [len, count] : bins)
        top = std::max(top, count);
    std::string out = open_svg(title) + value_axis(top, 4);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double slot = bins.empty() ? plot_w : plot_w / static_cast<double>(bins.size());
    std::size_t i = 0;
    for (const auto& [len, count] : bins) {
        const double x = kLeft + slot * static_cast<double>(i);
        const double h = plot_h * count / top;
        out += rect(x + slot * 0.1, kHeight - kBottom - h, slot * 0.8, h, kPalette[0], "none", "bin");
        out += text(x + slot / 2, kHeight - kBottom + 16, std::to_string(len));
        ++i;
    }
    out += text(kWidth / 2.0, kHeight - 12, "path length (time steps)");
    out += "</svg>\n";
    return out;
}

} // namespace mtb
