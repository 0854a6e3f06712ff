#include "driftlab/chart.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "driftlab/errors.hpp"

namespace drift::chart {

namespace {

// ===== Geometry =====

constexpr double kWidth = 800.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 640.0;  // plot area x range
constexpr double kTop = 50.0, kBottom = 430.0;  // plot area y range (svg y grows down)

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

Range padded(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double span = hi - lo;
    if (span <= 0.0) { // flat data still needs a visible band
        double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    return {lo - 0.05 * span, hi + 0.05 * span};
}

} // namespace

std::string render_line_chart(const ChartSpec& spec) {
    if (spec.series.empty()) throw RuntimeFailure("chart: no series to draw");
    for (const Series& s : spec.series) {
        if (s.x.empty() || s.y.empty())
            throw RuntimeFailure("chart: series \"" + s.label + "\" is empty");
        if (s.x.size() != s.y.size())
            throw RuntimeFailure("chart: series \"" + s.label + "\" has mismatched x/y");
    }

    double x_lo = spec.series[0].x[0], x_hi = x_lo;
    double y_lo = spec.series[0].y[0], y_hi = y_lo;
    for (const Series& s : spec.series) {
        for (double v : s.x) { x_lo = std::min(x_lo, v); x_hi = std::max(x_hi, v); }
        for (double v : s.y) { y_lo = std::min(y_lo, v); y_hi = std::max(y_hi, v); }
    }
    if (std::isfinite(spec.marker_x)) {
        x_lo = std::min(x_lo, spec.marker_x);
        x_hi = std::max(x_hi, spec.marker_x);
    }
    Range xr = padded(x_lo, x_hi);
    Range yr = padded(y_lo, y_hi);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape(spec.title) << "</text>\n";

    // axes
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\""
        << num(kRight) << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";

    // ticks and grid
    for (int i = 0; i <= 5; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        double px = xr.map(fx, kLeft, kRight);
        svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(px)
            << "\" y2=\"" << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(px) << "\" y=\"" << num(kBottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(fx) << "</text>\n";

        double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        double py = yr.map(fy, kBottom, kTop);
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py) << "\" x2=\"" << num(kRight)
            << "\" y2=\"" << num(py) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << num(kLeft - 9) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(fy) << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num((kTop + kBottom) / 2) << ")\">"
        << escape(spec.y_label) << "</text>\n";

    // drift marker
    if (std::isfinite(spec.marker_x)) {
        double px = xr.map(spec.marker_x, kLeft, kRight);
        svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px)
            << "\" y2=\"" << num(kBottom)
            << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << num(px + 4) << "\" y=\"" << num(kTop + 14)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">"
            << escape(spec.marker_label) << "</text>\n";
    }

    // series
    for (size_t si = 0; si < spec.series.size(); ++si) {
        const Series& s = spec.series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (s.x.size() == 1) {
            svg << "<circle cx=\"" << num(xr.map(s.x[0], kLeft, kRight)) << "\" cy=\""
                << num(yr.map(s.y[0], kBottom, kTop)) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" "
                << "points=\"";
            for (size_t i = 0; i < s.x.size(); ++i)
                svg << (i ? " " : "") << num(xr.map(s.x[i], kLeft, kRight)) << ","
                    << num(yr.map(s.y[i], kBottom, kTop));
            svg << "\"/>\n";
        }
    }

    // legend
    for (size_t si = 0; si < spec.series.size(); ++si) {
        double ly = kTop + 10 + 20.0 * double(si);
        svg << "<line x1=\"" << num(kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kRight + 36) << "\" y2=\"" << num(ly) << "\" stroke=\""
            << kPalette[si % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(kRight + 42) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(spec.series[si].label)
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace drift::chart
