#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cplearn {

struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

// Standalone SVG line chart; output is a pure function of the inputs.
// Empty series render axes only; single points render one marker.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series);

} // namespace cplearn
