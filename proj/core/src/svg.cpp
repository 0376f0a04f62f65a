#include "cplearn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cplearn {

namespace {

constexpr int width = 640, height = 420;
constexpr int margin_left = 70, margin_right = 30;
constexpr int margin_top = 50, margin_bottom = 60;

const char* const palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                               "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;
    auto px = [&](double x) {
        return margin_left + (x - xmin) / (xmax - xmin) * plot_w;
    };
    auto py = [&](double y) {
        return height - margin_bottom - (y - ymin) / (ymax - ymin) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << margin_left << "\" y1=\"" << height - margin_bottom
        << "\" x2=\"" << width - margin_right << "\" y2=\""
        << height - margin_bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top
        << "\" x2=\"" << margin_left << "\" y2=\"" << height - margin_bottom
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\" transform=\"rotate(-90 18 " << height / 2 << ")\">"
        << y_label << "</text>\n";

    // tick labels at the extremes
    out << "<text x=\"" << margin_left << "\" y=\"" << height - margin_bottom + 18
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(xmin)
        << "</text>\n";
    out << "<text x=\"" << width - margin_right << "\" y=\""
        << height - margin_bottom + 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(xmax) << "</text>\n";
    out << "<text x=\"" << margin_left - 6 << "\" y=\"" << height - margin_bottom
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(ymin) << "</text>\n";
    out << "<text x=\"" << margin_left - 6 << "\" y=\"" << margin_top + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(ymax) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = palette[si % (sizeof palette / sizeof *palette)];
        std::ostringstream path;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            path << (path.tellp() == 0 ? "M" : " L") << coord(px(x)) << " "
                 << coord(py(y));
            out << "<circle cx=\"" << coord(px(x)) << "\" cy=\"" << coord(py(y))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        if (!path.str().empty())
            out << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\""
                << color << "\" stroke-width=\"1.5\"/>\n";
        // legend entry
        const int ly = margin_top + 16 * static_cast<int>(si);
        out << "<rect x=\"" << width - margin_right - 150 << "\" y=\"" << ly - 8
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << width - margin_right - 135 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace cplearn
