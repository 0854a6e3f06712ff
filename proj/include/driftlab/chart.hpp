#pragma once

// Self-contained SVG line charts. Rendering is a pure function of the
// chart description, so identical inputs produce identical bytes — no
// timestamps, no external toolchain.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace drift::chart {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    // vertical reference line (e.g. the drift chunk); NaN disables it
    double marker_x = std::numeric_limits<double>::quiet_NaN();
    std::string marker_label = "drift";
};

// throws RuntimeFailure when there is nothing to draw (no series, an empty
// series, or mismatched x/y lengths)
std::string render_line_chart(const ChartSpec& spec);

} // namespace drift::chart
