#include "gwabm/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gwabm {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series, int width, int height) {
    const double left = 70, right = 180, top = 44, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::size_t n = 0;
    double y_max = 0.0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) y_max = std::max(y_max, v);
    }
    if (y_max <= 0.0) y_max = 1.0;
    const double x_max = n > 1 ? static_cast<double>(n - 1) : 1.0;

    auto px = [&](double x) { return left + x / x_max * plot_w; };
    auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };

    std::string svg;
    svg.reserve(1 << 16);
    char head[256];
    std::snprintf(head, sizeof(head),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    svg += head;
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(left + plot_w / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           xml_escape(title) + "</text>\n";

    // Gridlines and ticks.
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        double ty = y_max * i / ticks;
        double y = py(ty);
        svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + plot_w) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_tick(ty) + "</text>\n";
        double tx = x_max * i / ticks;
        double x = px(tx);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
               fmt(top + plot_h) + "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_tick(std::round(tx)) + "</text>\n";
    }
    // Axes.
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" +
           fmt(left + plot_w) + "\" y2=\"" + fmt(top + plot_h) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(top + plot_h + 38) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           fmt(top + plot_h / 2) + ")\">" + xml_escape(y_label) + "</text>\n";

    // Series polylines.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const ChartSeries& s = series[si];
        if (s.values.empty()) continue;
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += kPalette[si % kPaletteSize];
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) svg += ' ';
            svg += fmt(px(static_cast<double>(i))) + ',' + fmt(py(s.values[i]));
        }
        svg += "\"/>\n";
    }

    // Legend.
    double lx = left + plot_w + 14, ly = top + 10;
    for (std::size_t si = 0; si < series.size(); ++si) {
        svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 22) +
               "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"";
        svg += kPalette[si % kPaletteSize];
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(lx + 28) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(series[si].label) +
               "</text>\n";
        ly += 18;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace gwabm
