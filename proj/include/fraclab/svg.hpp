#pragma once

#include <string>
#include <vector>

namespace fraclab {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    bool scatter = false;  // markers only; otherwise polylines with markers
};

// Self-contained SVG document. Nonpositive values are dropped on log axes.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style);
void write_svg(const std::string& path, const std::vector<PlotSeries>& series, const PlotStyle& style);

}  // namespace fraclab
