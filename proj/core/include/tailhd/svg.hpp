// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tailhd/depth.hpp"

namespace tailhd {

// Self-contained static SVG output: no scripts, no external references, and
// no timestamps, so identical inputs render identical bytes.

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // non-finite points break the line
};

struct SvgChartOptions {
    int width = 760;
    int height = 480;
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;  // decade scale; non-positive values are dropped
};

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgChartOptions& opts);

// Sample scatter with nested contour outlines on top.
std::string render_contour_chart(const std::vector<std::pair<double, double>>& points,
                                 const std::vector<ContourPolygon>& contours,
                                 const SvgChartOptions& opts);

}  // namespace tailhd
