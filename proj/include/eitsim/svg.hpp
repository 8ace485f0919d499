// svg.hpp — static line plots
#pragma once

#include <string>
#include <vector>

namespace eitsim {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
};

struct PlotAxes {
    std::string x_label;
    std::string y_label;
    std::string title;
};

// One polyline per series; non-finite points are skipped. Output depends only
// on the inputs.
std::string emit_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes);

void write_text_file(const std::string& path, const std::string& text);

} // namespace eitsim
