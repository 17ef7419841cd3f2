// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "tailhd/svg.hpp"

using namespace tailhd;

namespace {

SvgSeries ramp(const std::string& label, double slope) {
    SvgSeries s;
    s.label = label;
    for (int i = 1; i <= 10; ++i) s.points.emplace_back(i, slope * i);
    return s;
}

}  // namespace

TEST_CASE("line charts are deterministic well-formed svg") {
    SvgChartOptions opts;
    opts.title = "depth < decay >";
    opts.x_label = "t";
    opts.y_label = "y";
    const std::vector<SvgSeries> series = {ramp("a", 1.0), ramp("b & c", -0.5)};
    const std::string svg = render_line_chart(series, opts);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    // Labels are escaped, never raw.
    CHECK(svg.find("depth &lt; decay &gt;") != std::string::npos);
    CHECK(svg.find("b &amp; c") != std::string::npos);
    CHECK(svg.find("b & c<") == std::string::npos);
    // No scripts, no external fetches, no timestamps.
    CHECK(svg.find("<script") == std::string::npos);
    CHECK(svg.find("http") != std::string::npos);  // only the xmlns namespace
    CHECK(svg.find("href") == std::string::npos);
    CHECK(render_line_chart(series, opts) == svg);
}

TEST_CASE("non-finite points break the polyline instead of leaking") {
    SvgSeries s;
    s.label = "gap";
    s.points = {{1, 1}, {2, std::numeric_limits<double>::quiet_NaN()}, {3, 2}, {4, 3}};
    const std::string svg = render_line_chart({s}, SvgChartOptions{});
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    // The path restarts after the gap: two move commands.
    const auto first_m = svg.find(" M ");
    REQUIRE(first_m != std::string::npos);
    const auto second_m = svg.find(" M ", first_m + 3);
    CHECK(second_m != std::string::npos);
}

TEST_CASE("log scale drops non-positive values") {
    SvgSeries s;
    s.label = "decay";
    s.points = {{1, 1.0}, {2, 0.1}, {3, 0.0}, {4, -0.5}, {5, 0.001}};
    SvgChartOptions opts;
    opts.log_y = true;
    const std::string svg = render_line_chart({s}, opts);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("1e") != std::string::npos);  // decade tick labels
    CHECK(render_line_chart({s}, opts) == svg);
}

TEST_CASE("contour charts draw scatter, outlines and tau labels") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 50; ++i)
        pts.emplace_back(std::cos(0.3 * i), std::sin(0.51 * i));
    ContourPolygon inner;
    inner.tau = 0.25;
    inner.vertices = {{0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}};
    ContourPolygon outer;
    outer.tau = 0.05;
    outer.vertices = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
    SvgChartOptions opts;
    opts.title = "contours";
    const std::string svg = render_contour_chart(pts, {outer, inner}, opts);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("tau=0.05") != std::string::npos);
    CHECK(svg.find("tau=0.25") != std::string::npos);
    CHECK(svg.find(" Z'") != std::string::npos);  // closed outlines
    CHECK(render_contour_chart(pts, {outer, inner}, opts) == svg);
}
