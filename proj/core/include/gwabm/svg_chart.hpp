#pragma once

#include <string>
#include <vector>

namespace gwabm {

struct ChartSeries {
    std::string label;
    std::vector<double> values; // y per x index (cycle)
};

/// Self-contained SVG line chart with axes, ticks and a legend. No external
/// renderer or service involved; the output is well-formed XML.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series, int width = 960,
                              int height = 540);

} // namespace gwabm
