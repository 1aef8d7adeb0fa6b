#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace bolab {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// XML comments must not contain "--"; the data table below is CSV of labels
// and %.17g numbers, where adjacent hyphens can only come from a label.
inline std::string comment_safe(std::string s) {
    size_t p = 0;
    while ((p = s.find("--", p)) != std::string::npos) s.replace(p, 2, "-_");
    return s;
}

} // namespace detail

// Standalone line plot with the full data table embedded as an XML comment,
// so the artifact is diffable and self-describing without a display stack.
inline std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel, const std::vector<PlotSeries>& series,
                                 int width = 720, int height = 480) {
    for (const PlotSeries& s : series)
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("svg_line_plot: series '" + s.label + "' x/y size mismatch");

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool any = false;
    for (const PlotSeries& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    if (xmax - xmin < 1e-300) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax - ymin < 1e-300) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    const double L = 72, R = 20, T = 42, B = 52;
    const double pw = width - L - R, ph = height - T - B;
    auto px = [&](double x) { return L + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return T + ph * (ymax - y) / (ymax - ymin); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "<!-- data table\nseries,x,y\n";
    for (const PlotSeries& s : series)
        for (size_t i = 0; i < s.x.size(); ++i)
            svg += detail::comment_safe(s.label) + "," + detail::fmt("%.17g", s.x[i]) + "," +
                   detail::fmt("%.17g", s.y[i]) + "\n";
    svg += "-->\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::fmt("%.1f", L + pw / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";

    // frame and ticks
    svg += "<rect x=\"" + detail::fmt("%.1f", L) + "\" y=\"" + detail::fmt("%.1f", T) +
           "\" width=\"" + detail::fmt("%.1f", pw) + "\" height=\"" + detail::fmt("%.1f", ph) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xmin + (xmax - xmin) * i / 4.0;
        double fy = ymin + (ymax - ymin) * i / 4.0;
        double sx = px(fx), sy = py(fy);
        svg += "<line x1=\"" + detail::fmt("%.1f", sx) + "\" y1=\"" +
               detail::fmt("%.1f", T + ph) + "\" x2=\"" + detail::fmt("%.1f", sx) + "\" y2=\"" +
               detail::fmt("%.1f", T + ph + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.1f", sx) + "\" y=\"" + detail::fmt("%.1f", T + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.4g", fx) + "</text>\n";
        svg += "<line x1=\"" + detail::fmt("%.1f", L - 5) + "\" y1=\"" + detail::fmt("%.1f", sy) +
               "\" x2=\"" + detail::fmt("%.1f", L) + "\" y2=\"" + detail::fmt("%.1f", sy) +
               "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.1f", L - 8) + "\" y=\"" + detail::fmt("%.1f", sy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.4g", fy) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt("%.1f", L + pw / 2) + "\" y=\"" +
           detail::fmt("%.1f", T + ph + 38) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + xlabel +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::fmt("%.1f", T + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           detail::fmt("%.1f", T + ph / 2) + ")\">" + ylabel + "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = palette[si % 6];
        std::string pts;
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            pts += detail::fmt("%.2f", px(s.x[i])) + "," + detail::fmt("%.2f", py(s.y[i])) + " ";
        }
        if (!pts.empty()) {
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
            for (size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                svg += "<circle cx=\"" + detail::fmt("%.2f", px(s.x[i])) + "\" cy=\"" +
                       detail::fmt("%.2f", py(s.y[i])) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
            }
        }
        if (series.size() > 1) {
            double ly = T + 16 + 16.0 * static_cast<double>(si);
            svg += "<line x1=\"" + detail::fmt("%.1f", L + pw - 130) + "\" y1=\"" +
                   detail::fmt("%.1f", ly - 4) + "\" x2=\"" + detail::fmt("%.1f", L + pw - 110) +
                   "\" y2=\"" + detail::fmt("%.1f", ly - 4) + "\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
            svg += "<text x=\"" + detail::fmt("%.1f", L + pw - 104) + "\" y=\"" +
                   detail::fmt("%.1f", ly) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace bolab
