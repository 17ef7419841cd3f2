// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/directions.hpp"

#include <cmath>
#include <numbers>

#include "tailhd/rng.hpp"

namespace tailhd {

DirectionSet canonical_directions(int d, bool with_negative) {
    if (d < 1) throw ConfigError("dimension must be positive");
    const int rows = with_negative ? 2 * d : d;
    DirectionSet s;
    s.dirs = Matrix::Zero(rows, d);
    for (int i = 0; i < d; ++i) {
        s.dirs(i, i) = 1.0;
        if (with_negative) s.dirs(d + i, i) = -1.0;
    }
    return s;
}

DirectionSet sphere_sample(int d, int k, std::uint64_t seed) {
    if (d < 1) throw ConfigError("dimension must be positive");
    if (k < 1) throw ConfigError("direction count must be positive");
    Rng rng(seed, 0x5d1);
    DirectionSet s;
    s.dirs = Matrix(k, d);
    for (int i = 0; i < k; ++i) {
        double norm2 = 0.0;
        do {
            for (int j = 0; j < d; ++j) s.dirs(i, j) = rng.gaussian();
            norm2 = s.dirs.row(i).squaredNorm();
        } while (norm2 == 0.0);
        s.dirs.row(i) /= std::sqrt(norm2);
    }
    return s;
}

DirectionSet grid_directions_2d(int k) {
    if (k < 1) throw ConfigError("direction count must be positive");
    DirectionSet s;
    s.dirs = Matrix(k, 2);
    for (int i = 0; i < k; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / k;
        s.dirs(i, 0) = std::cos(phi);
        s.dirs(i, 1) = std::sin(phi);
    }
    return s;
}

DirectionSet default_direction_set(int d, std::uint64_t seed, int k) {
    if (k <= 0) k = d <= 3 ? 1000 : 10 * d * d;
    const DirectionSet axes = canonical_directions(d);
    const DirectionSet rnd = sphere_sample(d, k, seed);
    DirectionSet s;
    s.dirs = Matrix(axes.k() + rnd.k(), d);
    s.dirs.topRows(axes.k()) = axes.dirs;
    s.dirs.bottomRows(rnd.k()) = rnd.dirs;
    return s;
}

double RotationMatrix::orthogonality_error() const {
    const Eigen::MatrixXd g = m.transpose() * m - Eigen::MatrixXd::Identity(m.rows(), m.cols());
    return g.cwiseAbs().maxCoeff();
}

RotationMatrix haar_rotation(int d, std::uint64_t seed) {
    if (d < 1) throw ConfigError("dimension must be positive");
    Rng rng(seed, 0x40a);
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge: make the R diagonal positive so Q is Haar, not an
    // arbitrary representative of the QR equivalence class.
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    if (q.determinant() < 0) q.col(d - 1) = -q.col(d - 1);
    return RotationMatrix{std::move(q)};
}

RotationMatrix reference_rotation_3d() {
    Eigen::MatrixXd a(3, 3);
    a << 0.3536, -0.4189, 0.8364,
         0.3536, 0.8876, 0.2952,
        -0.8660, 0.1913, 0.4619;
    return RotationMatrix{std::move(a)};
}

}  // namespace tailhd
