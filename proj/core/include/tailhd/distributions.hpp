// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailhd/config.hpp"
#include "tailhd/rng.hpp"
#include "tailhd/types.hpp"

namespace tailhd {

// ---------------------------------------------------------------------------
// One-dimensional marginals with closed-form CDF and quantile.

enum class MarginalKind { Gaussian, Laplace, Exponential, StudentT, Pareto };

struct Marginal {
    MarginalKind kind = MarginalKind::Gaussian;
    // gaussian(mu, sigma)     p1 = mu,    p2 = sigma > 0
    // laplace(mu, b)          p1 = mu,    p2 = b > 0
    // exponential(rate, shift)p1 = rate > 0, p2 = shift
    // student-t(nu)           p1 = nu > 0
    // pareto(alpha)           p1 = alpha > 0, support [1, inf)
    double p1 = 0.0;
    double p2 = 1.0;

    double cdf(double x) const;
    // Requires p in (0,1); throws ConfigError otherwise.
    double quantile(double p) const;
    double sample(Rng& rng) const;

    // Both throw ConfigError when the moment does not exist (e.g. t_1, Pareto(1)).
    double mean() const;
    double variance() const;

    std::string to_string() const;
    // Accepts e.g. "gaussian(0,1)", "laplace", "exponential(1,0)",
    // "student-t(3)", "pareto(2.2)".
    static Marginal parse(const std::string& text);
};

// ---------------------------------------------------------------------------
// Multivariate sampling laws used by the experiments.

enum class FamilyKind {
    Gaussian,            // mean vector + covariance (diagonal or full SPD)
    ProductLaplace,      // i.i.d. Laplace(0, scale) coordinates
    ProductExponential,  // i.i.d. shift + Exp(rate) coordinates
    RadialExponential,   // density proportional to exp(-|y|) in R^d
    ProductStudentT,     // i.i.d. t_nu coordinates
    SphericalStudentT,   // multivariate t: every 1-D projection is exactly t_nu
    ProductPareto,       // i.i.d. Pareto(alpha) on [1, inf)
    RotatedProduct,      // X = A^T Y with independent listed marginals Y
};

struct DistributionSpec {
    FamilyKind family = FamilyKind::Gaussian;
    int dim = 2;
    Eigen::VectorXd mean;            // gaussian; empty = zeros
    Eigen::MatrixXd cov;             // gaussian; empty = identity
    double scale = 1.0;              // product-laplace
    double rate = 1.0;               // product-exponential
    double shift = 0.0;              // product-exponential
    double nu = 3.0;                 // student-t families
    double alpha = 3.0;              // product-pareto
    std::vector<Marginal> marginals; // rotated-product, size == dim
    Eigen::MatrixXd rotation;        // rotated-product, orthogonal
    std::string rotation_desc;       // "reference-3d", "haar:SEED", or explicit rows

    // Throws ConfigError on violated parameter constraints.
    void validate() const;
    std::string family_name() const;

    // Reads keys under [section]: family plus per-family parameters.
    static DistributionSpec from_config(const Config& cfg, const std::string& section = "distribution");
    void to_config(Config& cfg, const std::string& section = "distribution") const;
};

FamilyKind parse_family(const std::string& name);

// n i.i.d. rows, deterministic per (spec, seed).
PointCloud sample(const DistributionSpec& spec, std::int64_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Population depth.

struct PopulationDepth {
    double value = 0.0;
    double se = 0.0;          // 0 when exact
    bool exact = false;       // closed form or converged quadrature
    bool precision_met = true;
};

struct PopulationDepthOptions {
    int directions = 512;             // direction budget for the Monte-Carlo path
    std::int64_t mc_samples = 1000000;
    std::uint64_t seed = 0x7a11bd17u;
    double tol = 1e-3;                // precision_met requires se <= tol (or exact)
};

// Spherically/elliptically symmetric families reduce to a 1-D projection CDF
// (analytic for Gaussian and spherical t, quadrature for radial-exponential).
// Product and rotated families fall back to Monte-Carlo depth over a sampled
// cloud with a binomial standard error at the minimizing direction.
PopulationDepth population_depth(const DistributionSpec& spec, const Vector& x,
                                 const PopulationDepthOptions& opts = {});

// True when population_depth takes the closed-form path (se = 0).
bool has_closed_form_depth(const DistributionSpec& spec);

// Survival function of the projection of the radial-exponential law in R^d
// onto a fixed unit vector, P(<u,X> >= s), absolute error <= 1e-10.
double radial_exponential_projection_survival(int d, double s);

// ---------------------------------------------------------------------------
// Tail lower-bound form g with depth(t x) >= c g(t |x|) for large t.

struct TailBoundG {
    enum class Form { Gauss, Exp, Power };
    Form form = Form::Exp;
    double alpha = 0.0;  // power only

    double operator()(double R) const;
    std::string to_string() const;
};

// Supported: radial-exponential -> exp(-R); standard Gaussian -> exp(-R^2/2);
// product-pareto(alpha) -> R^{-alpha}. Throws ConfigError otherwise.
TailBoundG tail_lower_bound(const DistributionSpec& spec);
bool has_tail_lower_bound(const DistributionSpec& spec);

}  // namespace tailhd
