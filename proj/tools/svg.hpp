#pragma once

// Minimal line-plot writer. Presentation only.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace ridgelab::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline void write_line_plot(const std::string& path, const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<Series>& series)
{
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 50.0;

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) {
        x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
        x1 = x0 + 2.0;
    }
    if (!(y1 > y0)) {
        y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
        y1 = y0 + 2.0;
    }
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ofstream out(path);
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">)",
                       width, height)
        << '\n';
    out << fmt::format(R"(<rect width="{}" height="{}" fill="white"/>)", width, height) << '\n';
    out << fmt::format(R"(<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>)", width / 2, title) << '\n';
    out << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)", left, height - bottom,
                       width - right)
        << '\n';
    out << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)", left, top, height - bottom)
        << '\n';
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{:.4g}</text>)", px(xv), height - bottom + 18, xv)
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{}" text-anchor="end">{:.4g}</text>)", left - 6, py(yv) + 4, yv) << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{}</text>)", (left + width - right) / 2,
                       height - 10, x_label)
        << '\n';
    out << fmt::format(R"~(<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>)~",
                       (top + height - bottom) / 2, y_label)
        << '\n';
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = colors[k % std::size(colors)];
        std::string pts;
        for (const auto& [x, y] : series[k].points) {
            if (std::isfinite(x) && std::isfinite(y))
                pts += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
        }
        out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)", color, pts) << '\n';
        out << fmt::format(R"(<text x="{}" y="{}" fill="{}">{}</text>)", width - right - 150, top + 14 * (k + 1), color,
                           series[k].label)
            << '\n';
    }
    out << "</svg>\n";
}

}  // namespace ridgelab::cli
