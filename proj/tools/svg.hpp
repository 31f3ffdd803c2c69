#pragma once

#include <string>
#include <vector>

namespace mathieu::cli {

struct Series {
    enum class Kind { Line, Steps, Markers };
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
    Kind kind = Kind::Line;
};

struct Polygon {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string fill = "#d62728";
    double opacity = 0.35;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    /// Lower clip for log axes, relative to the largest y.
    double log_floor = 1e-10;
    int width = 640;
    int height = 420;
    std::vector<Polygon> polygons{};
    std::vector<Series> series{};
};

/// Standalone SVG document. Output depends only on the spec (fixed number
/// formatting, no timestamps). Throws EmptyInput when nothing is drawable.
std::string emit_svg(const PlotSpec& spec);

/// Several plots tiled row-major into one document.
std::string emit_svg_grid(const std::vector<PlotSpec>& panels, int columns);

}  // namespace mathieu::cli
