// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tailhd {

// Observations are rows; row-major so per-point access is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixRef = Eigen::Ref<const Matrix>;
using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Vector>;

/// Raised when an input (file, cloud, query) is malformed.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a config value is missing, unparseable, or out of contract.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a request exceeds a documented resource cap.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// A sample of n points in R^d. Entries must be finite.
struct PointCloud {
    Matrix pts;

    PointCloud() = default;
    explicit PointCloud(Matrix m) : pts(std::move(m)) { validate(); }

    Eigen::Index n() const { return pts.rows(); }
    Eigen::Index dim() const { return pts.cols(); }

    void validate() const {
        if (pts.rows() == 0 || pts.cols() == 0)
            throw DataError("point cloud must be non-empty");
        if (!pts.allFinite())
            throw DataError("point cloud contains non-finite entries");
    }
};

/// An empirical depth: numerator / n. Keeping the integer count exact lets
/// callers reason about ties and single-point resolution.
struct DepthValue {
    std::int64_t numerator = 0;
    std::int64_t n = 0;

    double value() const { return n == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(n); }
    bool positive() const { return numerator > 0; }
};

}  // namespace tailhd
