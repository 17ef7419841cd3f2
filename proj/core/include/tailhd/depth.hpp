// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <vector>

#include "tailhd/types.hpp"

namespace tailhd {

// Halfspace (Tukey) depth of a query point against a finite sample, with all
// halfspaces CLOSED: a point sitting exactly on a boundary hyperplane counts
// on both sides. Every routine here returns exact integer counts.

/// Projections of all points onto a direction, sorted ascending.
struct ProjectedSample {
    std::vector<double> values;
};

ProjectedSample project(MatrixRef cloud, VectorRef direction);

/// min(#{v <= x}, #{v >= x}) / n over a sorted projection.
DepthValue univariate_depth(const ProjectedSample& proj, double x);

/// Upper bound on the depth: minimum over the supplied directions of the
/// univariate depth of <h,x> within <h, cloud>. Never below the exact depth,
/// and equal to it in d = 1 by construction.
DepthValue depth_approx(MatrixRef cloud, VectorRef x, MatrixRef directions);

/// Exact depth in the plane by an angular sweep around x, O(n log n).
/// Boundary ties and coincident points are resolved by sign predicates on
/// cross/dot products, not by floating-point angles.
DepthValue depth_exact_2d(MatrixRef cloud, VectorRef x);

/// Exact depth in d <= 4 by enumerating candidate hyperplanes through x
/// spanned by (d-1)-subsets of the data, with boundary ties resolved by a
/// recursive in-hyperplane minimisation. Reference oracle, O(n^d); capped at
/// n <= 200, d <= 4 (ResourceLimitError beyond).
DepthValue depth_exact_brute(MatrixRef cloud, VectorRef x);

inline constexpr Eigen::Index BRUTE_MAX_N = 200;
inline constexpr Eigen::Index BRUTE_MAX_D = 4;

/// Dispatcher used by the diagnostics layer: exact for d <= 2, otherwise the
/// directional upper bound.
DepthValue depth_dispatch(MatrixRef cloud, VectorRef x, MatrixRef directions);

/// A depth contour: intersection of the sweep halfplanes that cut off fewer
/// than ceil(tau * n) points. Vertices are counter-clockwise; empty when the
/// constraints are infeasible (tau above the maximal depth).
struct ContourPolygon {
    double tau = 0.0;
    std::vector<Eigen::Vector2d> vertices;

    bool empty() const { return vertices.size() < 3; }
};

ContourPolygon depth_contour_2d(MatrixRef cloud, double tau, int resolution = 720);

/// Point-in-convex-polygon test (closed; boundary counts as inside).
bool polygon_contains(const ContourPolygon& poly, const Eigen::Vector2d& p, double tol = 1e-9);

double polygon_area(const ContourPolygon& poly);

}  // namespace tailhd
