// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tailhd/types.hpp"

namespace tailhd {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (!valid()) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

// Round tick step: {1,2,5} x 10^k closest below range/count.
std::vector<double> ticks(double lo, double hi, int count) {
    std::vector<double> out;
    const double span = hi - lo;
    if (span <= 0) return out;
    const double raw = span / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double mult : {1.0, 2.0, 5.0, 10.0})
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v == 0.0 ? 0.0 : v);
    return out;
}

struct Frame {
    double x0, y0, x1, y1;  // plot rectangle in pixels (y grows downward)
    Range rx, ry;
    bool log_y = false;

    double px(double x) const { return x0 + (x - rx.lo) / (rx.hi - rx.lo) * (x1 - x0); }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return y1 - (v - ry.lo) / (ry.hi - ry.lo) * (y1 - y0);
    }
};

void render_axes(std::string& svg, const Frame& f, const SvgChartOptions& opts) {
    svg += "<rect x='" + num(f.x0) + "' y='" + num(f.y0) + "' width='" + num(f.x1 - f.x0) +
           "' height='" + num(f.y1 - f.y0) + "' fill='none' stroke='#333' stroke-width='1'/>\n";
    for (const double v : ticks(f.rx.lo, f.rx.hi, 6)) {
        const double x = f.px(v);
        svg += "<line x1='" + num(x) + "' y1='" + num(f.y1) + "' x2='" + num(x) + "' y2='" +
               num(f.y1 + 5) + "' stroke='#333'/>\n";
        svg += "<text x='" + num(x) + "' y='" + num(f.y1 + 18) +
               "' font-size='11' text-anchor='middle' fill='#333'>" + tick_label(v) + "</text>\n";
    }
    if (opts.log_y) {
        const int dlo = static_cast<int>(std::ceil(f.ry.lo - 1e-9));
        const int dhi = static_cast<int>(std::floor(f.ry.hi + 1e-9));
        for (int e = dlo; e <= dhi; ++e) {
            const double y = f.y1 - (e - f.ry.lo) / (f.ry.hi - f.ry.lo) * (f.y1 - f.y0);
            svg += "<line x1='" + num(f.x0 - 5) + "' y1='" + num(y) + "' x2='" + num(f.x0) +
                   "' y2='" + num(y) + "' stroke='#333'/>\n";
            svg += "<text x='" + num(f.x0 - 8) + "' y='" + num(y + 4) +
                   "' font-size='11' text-anchor='end' fill='#333'>1e" + std::to_string(e) +
                   "</text>\n";
        }
    } else {
        for (const double v : ticks(f.ry.lo, f.ry.hi, 6)) {
            const double y = f.y1 - (v - f.ry.lo) / (f.ry.hi - f.ry.lo) * (f.y1 - f.y0);
            svg += "<line x1='" + num(f.x0 - 5) + "' y1='" + num(y) + "' x2='" + num(f.x0) +
                   "' y2='" + num(y) + "' stroke='#333'/>\n";
            svg += "<text x='" + num(f.x0 - 8) + "' y='" + num(y + 4) +
                   "' font-size='11' text-anchor='end' fill='#333'>" + tick_label(v) + "</text>\n";
        }
    }
    if (!opts.title.empty())
        svg += "<text x='" + num((f.x0 + f.x1) / 2) +
               "' y='20' font-size='14' text-anchor='middle' fill='#111'>" + escape(opts.title) +
               "</text>\n";
    if (!opts.x_label.empty())
        svg += "<text x='" + num((f.x0 + f.x1) / 2) + "' y='" + num(f.y1 + 36) +
               "' font-size='12' text-anchor='middle' fill='#111'>" + escape(opts.x_label) +
               "</text>\n";
    if (!opts.y_label.empty())
        svg += "<text x='14' y='" + num((f.y0 + f.y1) / 2) +
               "' font-size='12' text-anchor='middle' fill='#111' transform='rotate(-90 14 " +
               num((f.y0 + f.y1) / 2) + ")'>" + escape(opts.y_label) + "</text>\n";
}

std::string svg_open(int w, int h) {
    return "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(w) + "' height='" +
           std::to_string(h) + "' viewBox='0 0 " + std::to_string(w) + " " + std::to_string(h) +
           "'>\n<rect width='100%' height='100%' fill='white'/>\n";
}

}  // namespace

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgChartOptions& opts) {
    Frame f;
    f.x0 = 62;
    f.y0 = 30;
    f.x1 = opts.width - 20;
    f.y1 = opts.height - 46;
    f.log_y = opts.log_y;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (opts.log_y && y <= 0.0) continue;
            f.rx.add(x);
            f.ry.add(opts.log_y ? std::log10(y) : y);
        }
    f.rx.pad();
    f.ry.pad();

    std::string svg = svg_open(opts.width, opts.height);
    render_axes(svg, f, opts);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        std::string path;
        bool pen_down = false;
        for (const auto& [x, y] : series[i].points) {
            const bool ok = std::isfinite(x) && std::isfinite(y) && (!opts.log_y || y > 0.0);
            if (!ok) {
                pen_down = false;
                continue;
            }
            path += (pen_down ? " L " : " M ");
            path += num(f.px(x)) + " " + num(f.py(y));
            pen_down = true;
        }
        if (!path.empty())
            svg += "<path d='" + path + "' fill='none' stroke='" + color +
                   "' stroke-width='1.6'/>\n";
        // legend row
        const double ly = f.y0 + 16 + 16 * static_cast<double>(i);
        svg += "<line x1='" + num(f.x1 - 130) + "' y1='" + num(ly - 4) + "' x2='" +
               num(f.x1 - 110) + "' y2='" + num(ly - 4) + "' stroke='" + color +
               "' stroke-width='2'/>\n";
        svg += "<text x='" + num(f.x1 - 104) + "' y='" + num(ly) +
               "' font-size='11' fill='#111'>" + escape(series[i].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_contour_chart(const std::vector<std::pair<double, double>>& points,
                                 const std::vector<ContourPolygon>& contours,
                                 const SvgChartOptions& opts) {
    Frame f;
    f.x0 = 62;
    f.y0 = 30;
    f.x1 = opts.width - 20;
    f.y1 = opts.height - 46;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        f.rx.add(x);
        f.ry.add(y);
    }
    for (const auto& poly : contours)
        for (const auto& v : poly.vertices) {
            f.rx.add(v.x());
            f.ry.add(v.y());
        }
    f.rx.pad();
    f.ry.pad();

    std::string svg = svg_open(opts.width, opts.height);
    render_axes(svg, f, opts);
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        svg += "<circle cx='" + num(f.px(x)) + "' cy='" + num(f.py(y)) +
               "' r='1.4' fill='#9ecae1'/>\n";
    }
    for (std::size_t i = 0; i < contours.size(); ++i) {
        const ContourPolygon& poly = contours[i];
        if (poly.empty()) continue;
        const char* color = kPalette[i % kPaletteSize];
        std::string path;
        for (std::size_t j = 0; j < poly.vertices.size(); ++j) {
            path += (j == 0 ? "M " : " L ");
            path += num(f.px(poly.vertices[j].x())) + " " + num(f.py(poly.vertices[j].y()));
        }
        path += " Z";
        svg += "<path d='" + path + "' fill='none' stroke='" + color + "' stroke-width='1.6'/>\n";
        svg += "<text x='" + num(f.x1 - 104) + "' y='" +
               num(f.y0 + 16 + 16 * static_cast<double>(i)) + "' font-size='11' fill='" + color +
               "'>tau=" + tick_label(poly.tau) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tailhd
