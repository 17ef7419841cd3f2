// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tailhd/depth.hpp"
#include "tailhd/directions.hpp"
#include "tailhd/rng.hpp"
#include "util.hpp"

using namespace tailhd;
using tailhd::testing::gaussian_cloud;
using tailhd::testing::vec2;

namespace {

Matrix square_cloud() {
    Matrix m(4, 2);
    m << 1, 1, 1, -1, -1, 1, -1, -1;
    return m;
}

Matrix pentagon_cloud() {
    Matrix m(5, 2);
    for (int i = 0; i < 5; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 5.0;
        m(i, 0) = std::cos(a);
        m(i, 1) = std::sin(a);
    }
    return m;
}

}  // namespace

TEST_CASE("univariate depth counts closed halflines") {
    ProjectedSample proj;
    proj.values = {1, 1, 2, 5};
    CHECK(univariate_depth(proj, 1.0).numerator == 2);   // min(#<=1, #>=1) = min(2, 4)
    CHECK(univariate_depth(proj, 2.0).numerator == 2);   // min(3, 2)
    CHECK(univariate_depth(proj, 1.5).numerator == 2);   // min(2, 2)
    CHECK(univariate_depth(proj, 5.0).numerator == 1);
    CHECK(univariate_depth(proj, 0.0).numerator == 0);
    CHECK(univariate_depth(proj, 6.0).numerator == 0);
    CHECK(univariate_depth(proj, 1.0).n == 4);
}

TEST_CASE("project sorts the inner products") {
    Matrix m(3, 2);
    m << 2, 0, -1, 0, 0.5, 0;
    Vector u(2);
    u << 1, 0;
    const ProjectedSample p = project(m, u);
    REQUIRE(p.values.size() == 3);
    CHECK(p.values[0] == -1.0);
    CHECK(p.values[1] == 0.5);
    CHECK(p.values[2] == 2.0);
}

TEST_CASE("exact 2d depth matches hand-computed cases") {
    const Matrix sq = square_cloud();
    // Center, vertex, edge midpoint, outside.
    CHECK(depth_exact_2d(sq, vec2(0, 0)).numerator == 2);
    CHECK(depth_exact_2d(sq, vec2(1, 1)).numerator == 1);
    CHECK(depth_exact_2d(sq, vec2(1, 0)).numerator == 1);
    CHECK(depth_exact_2d(sq, vec2(2, 2)).numerator == 0);
    CHECK(depth_exact_2d(sq, vec2(0, 0)).n == 4);

    const Matrix pent = pentagon_cloud();
    CHECK(depth_exact_2d(pent, vec2(0, 0)).numerator == 2);
    CHECK(depth_exact_2d(pent, vec2(1, 0)).numerator == 1);

    Matrix tri(3, 2);
    tri << 0, 0, 1, 0, 0, 1;
    CHECK(depth_exact_2d(tri, vec2(0, 0)).numerator == 1);
    CHECK(depth_exact_2d(tri, vec2(0.25, 0.25)).numerator == 1);

    // Degenerate collinear cloud: the sweep must not divide by zero.
    Matrix line(3, 2);
    line << 0, 0, 1, 0, 2, 0;
    CHECK(depth_exact_2d(line, vec2(1, 0)).numerator == 2);
    CHECK(depth_exact_2d(line, vec2(0.5, 0)).numerator == 1);
    CHECK(depth_exact_2d(line, vec2(1, 1)).numerator == 0);
}

TEST_CASE("brute force depth agrees on the same cases") {
    const Matrix sq = square_cloud();
    CHECK(depth_exact_brute(sq, vec2(0, 0)).numerator == 2);
    CHECK(depth_exact_brute(sq, vec2(1, 1)).numerator == 1);
    CHECK(depth_exact_brute(sq, vec2(1, 0)).numerator == 1);
    CHECK(depth_exact_brute(sq, vec2(2, 2)).numerator == 0);

    // Octahedron in R^3: center has depth 3/6, a vertex 1/6.
    Matrix oct(6, 3);
    oct << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    Vector zero3 = Vector::Zero(3);
    Vector e1(3);
    e1 << 1, 0, 0;
    Vector mid(3);
    mid << 0.5, 0, 0;
    CHECK(depth_exact_brute(oct, zero3).numerator == 3);
    CHECK(depth_exact_brute(oct, e1).numerator == 1);
    CHECK(depth_exact_brute(oct, mid).numerator == 1);

    // Cross-polytope in R^4: center has depth 4/8.
    Matrix cross = Matrix::Zero(8, 4);
    for (int j = 0; j < 4; ++j) {
        cross(2 * j, j) = 1;
        cross(2 * j + 1, j) = -1;
    }
    CHECK(depth_exact_brute(cross, Vector::Zero(4)).numerator == 4);
}

TEST_CASE("brute force depth enforces its resource caps") {
    const PointCloud big = gaussian_cloud(BRUTE_MAX_N + 1, 2, 3);
    CHECK_THROWS_AS(depth_exact_brute(big.pts, vec2(0, 0)), ResourceLimitError);
    const PointCloud wide = gaussian_cloud(20, 5, 3);
    CHECK_THROWS_AS(depth_exact_brute(wide.pts, Vector::Zero(5)), ResourceLimitError);
}

TEST_CASE("sweep equals brute force on random and tied clouds") {
    Rng rng(2024);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 5 + static_cast<int>(rng.next_u64() % 36);
        Matrix m(n, 2);
        const bool lattice = rep % 2 == 0;
        for (int i = 0; i < n; ++i) {
            if (lattice) {
                // Small integer lattice: many collinear triples and ties.
                m(i, 0) = static_cast<double>(rng.next_u64() % 5);
                m(i, 1) = static_cast<double>(rng.next_u64() % 5);
            } else {
                m(i, 0) = rng.gaussian();
                m(i, 1) = rng.gaussian();
            }
        }
        for (int q = 0; q < 8; ++q) {
            Vector x(2);
            if (q < 3) {
                x = m.row(static_cast<Eigen::Index>(rng.next_u64() % n)).transpose();
            } else if (q < 5) {
                const auto a = m.row(static_cast<Eigen::Index>(rng.next_u64() % n));
                const auto b = m.row(static_cast<Eigen::Index>(rng.next_u64() % n));
                x = 0.5 * (a + b).transpose();
            } else if (lattice) {
                x = vec2(std::floor(rng.uniform() * 5), std::floor(rng.uniform() * 5));
            } else {
                x = vec2(2.0 * rng.gaussian(), 2.0 * rng.gaussian());
            }
            const DepthValue sweep = depth_exact_2d(m, x);
            const DepthValue brute = depth_exact_brute(m, x);
            REQUIRE(sweep.n == brute.n);
            REQUIRE_MESSAGE(sweep.numerator == brute.numerator,
                            "rep ", rep, " query (", x(0), ",", x(1), ")");
        }
    }
}

TEST_CASE("directional approximation never undershoots the exact depth") {
    Rng rng(99);
    const PointCloud cloud = gaussian_cloud(120, 2, 7);
    const DirectionSet dirs = default_direction_set(2, 5, 128);
    for (int q = 0; q < 40; ++q) {
        const Vector x = vec2(1.5 * rng.gaussian(), 1.5 * rng.gaussian());
        const DepthValue exact = depth_exact_2d(cloud.pts, x);
        const DepthValue approx = depth_approx(cloud.pts, x, dirs.dirs);
        CHECK(approx.n == exact.n);
        CHECK(approx.numerator >= exact.numerator);
    }
}

TEST_CASE("one direction reduces the approximation to univariate depth") {
    const PointCloud cloud = gaussian_cloud(50, 1, 4);
    Matrix one_dir(1, 1);
    one_dir << 1;
    const ProjectedSample proj = project(cloud.pts, one_dir.row(0).transpose());
    for (double x : {-1.0, 0.0, 0.3, 2.0}) {
        Vector q(1);
        q << x;
        CHECK(depth_approx(cloud.pts, q, one_dir).numerator ==
              univariate_depth(proj, x).numerator);
    }
}

TEST_CASE("dispatcher picks the exact path in low dimension") {
    const DirectionSet dirs2 = default_direction_set(2, 1, 64);
    const PointCloud c2 = gaussian_cloud(80, 2, 12);
    for (int q = 0; q < 10; ++q) {
        const Vector x = c2.pts.row(q * 3).transpose();
        CHECK(depth_dispatch(c2.pts, x, dirs2.dirs).numerator ==
              depth_exact_2d(c2.pts, x).numerator);
    }
    const PointCloud c3 = gaussian_cloud(80, 3, 12);
    const DirectionSet dirs3 = default_direction_set(3, 1, 64);
    for (int q = 0; q < 10; ++q) {
        const Vector x = c3.pts.row(q * 3).transpose();
        CHECK(depth_dispatch(c3.pts, x, dirs3.dirs).numerator ==
              depth_approx(c3.pts, x, dirs3.dirs).numerator);
    }
}

TEST_CASE("depth is affine and permutation invariant") {
    const PointCloud cloud = gaussian_cloud(150, 2, 31);
    Eigen::Matrix2d a;
    a << 2, 1, 0.5, 3;
    Eigen::Vector2d b(-1, 2);
    Matrix mapped(cloud.n(), 2);
    for (Eigen::Index i = 0; i < cloud.n(); ++i)
        mapped.row(i) = (a * cloud.pts.row(i).transpose() + b).transpose();

    Matrix shuffled = cloud.pts;
    Rng rng(8);
    for (Eigen::Index i = shuffled.rows() - 1; i > 0; --i) {
        const Eigen::Index j = static_cast<Eigen::Index>(rng.next_u64() % (i + 1));
        shuffled.row(i).swap(shuffled.row(j));
    }

    for (int q = 0; q < 25; ++q) {
        const Vector x = cloud.pts.row(q * 5).transpose();
        const Vector ax = a * x + b;
        const auto ref = depth_exact_2d(cloud.pts, x);
        CHECK(depth_exact_2d(mapped, ax).numerator == ref.numerator);
        CHECK(depth_exact_2d(shuffled, x).numerator == ref.numerator);
    }
}

TEST_CASE("contours are nested, contain their depth region and stay in hull") {
    const PointCloud cloud = gaussian_cloud(400, 2, 5);
    const std::vector<double> taus = {0.05, 0.1, 0.2, 0.3};
    std::vector<ContourPolygon> polys;
    for (double tau : taus) polys.push_back(depth_contour_2d(cloud.pts, tau, 720));
    for (const auto& p : polys) {
        REQUIRE_FALSE(p.empty());
        CHECK(polygon_area(p) > 0.0);
    }
    // Deeper contours are smaller and nested inside shallower ones.
    for (std::size_t i = 1; i < polys.size(); ++i) {
        CHECK(polygon_area(polys[i]) < polygon_area(polys[i - 1]));
        for (const auto& v : polys[i].vertices)
            CHECK(polygon_contains(polys[i - 1], v, 1e-7));
    }
    // Every sample point of depth >= ceil(tau n)/n lies inside (the polygon is
    // an outer approximation of the true contour, so no false negatives).
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const std::int64_t need =
            static_cast<std::int64_t>(std::ceil(taus[ti] * static_cast<double>(cloud.n())));
        for (Eigen::Index i = 0; i < cloud.n(); i += 7) {
            const Vector x = cloud.pts.row(i).transpose();
            if (depth_exact_2d(cloud.pts, x).numerator >= need)
                CHECK(polygon_contains(polys[ti], Eigen::Vector2d(x(0), x(1)), 1e-7));
        }
    }
    // Far away points are outside; infeasible tau gives an empty polygon.
    CHECK_FALSE(polygon_contains(polys[0], Eigen::Vector2d(100, 100)));
    CHECK(depth_contour_2d(cloud.pts, 0.6, 720).empty());
}

TEST_CASE("polygon predicates treat the boundary as inside") {
    ContourPolygon sq;
    sq.tau = 0.1;
    sq.vertices = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};  // CCW unit square x2
    CHECK(polygon_contains(sq, {0, 0}));
    CHECK(polygon_contains(sq, {1, 0}));
    CHECK(polygon_contains(sq, {1, 1}));
    CHECK_FALSE(polygon_contains(sq, {1.001, 0}));
    CHECK(doctest::Approx(polygon_area(sq)).epsilon(1e-12) == 4.0);
    ContourPolygon none;
    CHECK(none.empty());
    CHECK(polygon_area(none) == 0.0);
}
