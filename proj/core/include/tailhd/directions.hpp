// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cstdint>

#include "tailhd/types.hpp"

namespace tailhd {

/// A bundle of unit direction vectors (rows).
struct DirectionSet {
    Matrix dirs;

    Eigen::Index k() const { return dirs.rows(); }
    Eigen::Index dim() const { return dirs.cols(); }
};

/// e_1..e_d, optionally followed by -e_1..-e_d.
DirectionSet canonical_directions(int d, bool with_negative = false);

/// K iid uniform directions on the unit sphere (normalised Gaussians).
DirectionSet sphere_sample(int d, int k, std::uint64_t seed);

/// K equally spaced directions on the circle (d = 2 only).
DirectionSet grid_directions_2d(int k);

/// Canonical axes plus a seeded sphere sample; the workhorse set for
/// approximate depth. k = 0 picks the default budget (1000 for d <= 3,
/// else 10 d^2).
DirectionSet default_direction_set(int d, std::uint64_t seed, int k = 0);

/// Seed used whenever a default direction set is built on demand (curves,
/// ratio grids, the CLI). One shared constant keeps runs comparable.
inline constexpr std::uint64_t kDefaultDirectionSeed = 0xd17ec7ULL;

struct RotationMatrix {
    Eigen::MatrixXd m;

    Eigen::Index dim() const { return m.rows(); }
    /// Max abs deviation of m^T m from the identity.
    double orthogonality_error() const;
};

/// Haar-distributed rotation: QR of a Gaussian matrix with the R diagonal
/// sign-fixed, then det forced to +1. Orthogonal to machine precision.
RotationMatrix haar_rotation(int d, std::uint64_t seed);

/// Fixed 3-D rotation used by the bundled example configs and acceptance
/// experiments. Printed to four decimals, so only orthogonal to ~1e-3.
RotationMatrix reference_rotation_3d();

}  // namespace tailhd
