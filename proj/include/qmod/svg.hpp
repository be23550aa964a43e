#pragma once

#include <string>
#include <vector>

namespace qmod {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
};

/// Self-contained SVG line plot: frame, tick labels, one polyline per series
/// and a legend. Non-finite points break the polyline.
std::string render_svg(const SvgPlot& plot);

} // namespace qmod
