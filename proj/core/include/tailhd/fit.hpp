// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tailhd {

/// Ordinary least squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;   // from residual variance; 0 when m <= 2
    double rms = 0.0;        // root mean squared residual
    std::size_t m = 0;

    double at(double x) const { return intercept + slope * x; }
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.m = x.size();
    if (f.m < 2) return f;
    const double n = static_cast<double>(f.m);
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < f.m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < f.m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < f.m; ++i) {
        const double r = y[i] - f.at(x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    if (f.m > 2) f.slope_se = std::sqrt(ss / (n - 2.0) / sxx);
    return f;
}

/// Least squares for y ~ columns(X); returns coefficients, their standard
/// errors and the residual RMS. Solved by column-pivoted QR.
struct MultiFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    double rms = 0.0;
    std::size_t m = 0;
};

inline MultiFit fit_multi(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    MultiFit f;
    f.m = static_cast<std::size_t>(X.rows());
    const Eigen::Index p = X.cols();
    f.coef = Eigen::VectorXd::Zero(p);
    f.se = Eigen::VectorXd::Zero(p);
    if (X.rows() <= p) return f;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    f.coef = qr.solve(y);
    const Eigen::VectorXd resid = y - X * f.coef;
    const double dof = static_cast<double>(X.rows() - p);
    const double s2 = resid.squaredNorm() / dof;
    f.rms = std::sqrt(resid.squaredNorm() / static_cast<double>(X.rows()));
    // (X'X)^-1 diagonal for coefficient variances.
    const Eigen::MatrixXd xtx = X.transpose() * X;
    const Eigen::MatrixXd inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double v = inv(j, j);
        f.se(j) = v > 0 ? std::sqrt(s2 * v) : 0.0;
    }
    return f;
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace tailhd
