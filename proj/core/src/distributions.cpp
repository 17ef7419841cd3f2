// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/distributions.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "tailhd/csv.hpp"
#include "tailhd/depth.hpp"
#include "tailhd/directions.hpp"

namespace tailhd {

namespace {

double gauss_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::once_flag gsl_handler_once;
void disable_gsl_abort() {
    // GSL aborts the process by default; we convert status codes to exceptions.
    std::call_once(gsl_handler_once, [] { gsl_set_error_handler_off(); });
}

std::string format_param(double v) { return format_double(v); }

}  // namespace

// ---------------------------------------------------------------------------
// Marginal

double Marginal::cdf(double x) const {
    switch (kind) {
        case MarginalKind::Gaussian:
            return gauss_cdf((x - p1) / p2);
        case MarginalKind::Laplace:
            return x < p1 ? 0.5 * std::exp((x - p1) / p2) : 1.0 - 0.5 * std::exp(-(x - p1) / p2);
        case MarginalKind::Exponential:
            return x <= p2 ? 0.0 : 1.0 - std::exp(-p1 * (x - p2));
        case MarginalKind::StudentT:
            disable_gsl_abort();
            return gsl_cdf_tdist_P(x, p1);
        case MarginalKind::Pareto:
            return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -p1);
    }
    return 0.0;
}

double Marginal::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile requires p in (0,1)");
    switch (kind) {
        case MarginalKind::Gaussian:
            disable_gsl_abort();
            return p1 + p2 * gsl_cdf_ugaussian_Pinv(p);
        case MarginalKind::Laplace:
            return p < 0.5 ? p1 + p2 * std::log(2.0 * p) : p1 - p2 * std::log(2.0 * (1.0 - p));
        case MarginalKind::Exponential:
            return p2 - std::log1p(-p) / p1;
        case MarginalKind::StudentT:
            disable_gsl_abort();
            return gsl_cdf_tdist_Pinv(p, p1);
        case MarginalKind::Pareto:
            return std::pow(1.0 - p, -1.0 / p1);
    }
    return 0.0;
}

double Marginal::sample(Rng& rng) const {
    switch (kind) {
        case MarginalKind::Gaussian:
            return p1 + p2 * rng.gaussian();
        case MarginalKind::Laplace:
            return p1 + rng.laplace(p2);
        case MarginalKind::Exponential:
            return p2 + rng.exponential(p1);
        case MarginalKind::StudentT:
            return rng.student_t(p1);
        case MarginalKind::Pareto:
            return rng.pareto(p1);
    }
    return 0.0;
}

double Marginal::mean() const {
    switch (kind) {
        case MarginalKind::Gaussian:
            return p1;
        case MarginalKind::Laplace:
            return p1;
        case MarginalKind::Exponential:
            return p2 + 1.0 / p1;
        case MarginalKind::StudentT:
            if (p1 <= 1.0) throw ConfigError("t mean undefined for nu <= 1");
            return 0.0;
        case MarginalKind::Pareto:
            if (p1 <= 1.0) throw ConfigError("Pareto mean undefined for alpha <= 1");
            return p1 / (p1 - 1.0);
    }
    return 0.0;
}

double Marginal::variance() const {
    switch (kind) {
        case MarginalKind::Gaussian:
            return p2 * p2;
        case MarginalKind::Laplace:
            return 2.0 * p2 * p2;
        case MarginalKind::Exponential:
            return 1.0 / (p1 * p1);
        case MarginalKind::StudentT:
            if (p1 <= 2.0) throw ConfigError("t variance undefined for nu <= 2");
            return p1 / (p1 - 2.0);
        case MarginalKind::Pareto:
            if (p1 <= 2.0) throw ConfigError("Pareto variance undefined for alpha <= 2");
            return p1 / ((p1 - 1.0) * (p1 - 1.0) * (p1 - 2.0));
    }
    return 0.0;
}

std::string Marginal::to_string() const {
    switch (kind) {
        case MarginalKind::Gaussian:
            return "gaussian(" + format_param(p1) + "," + format_param(p2) + ")";
        case MarginalKind::Laplace:
            return "laplace(" + format_param(p1) + "," + format_param(p2) + ")";
        case MarginalKind::Exponential:
            return "exponential(" + format_param(p1) + "," + format_param(p2) + ")";
        case MarginalKind::StudentT:
            return "student-t(" + format_param(p1) + ")";
        case MarginalKind::Pareto:
            return "pareto(" + format_param(p1) + ")";
    }
    return "";
}

Marginal Marginal::parse(const std::string& text) {
    std::string name = text;
    std::vector<double> args;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')') throw ConfigError("malformed marginal: " + text);
        name = text.substr(0, open);
        for (const auto& tok : split_list(text.substr(open + 1, text.size() - open - 2))) {
            try {
                args.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("malformed marginal parameter in: " + text);
            }
        }
    }
    const auto trim_ws = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    name = trim_ws(name);
    const auto arg = [&](std::size_t i, double fallback) {
        return i < args.size() ? args[i] : fallback;
    };
    Marginal m;
    if (name == "gaussian" || name == "normal") {
        m.kind = MarginalKind::Gaussian;
        m.p1 = arg(0, 0.0);
        m.p2 = arg(1, 1.0);
        if (m.p2 <= 0.0) throw ConfigError("gaussian sigma must be > 0: " + text);
    } else if (name == "laplace") {
        m.kind = MarginalKind::Laplace;
        m.p1 = arg(0, 0.0);
        m.p2 = arg(1, 1.0);
        if (m.p2 <= 0.0) throw ConfigError("laplace scale must be > 0: " + text);
    } else if (name == "exponential") {
        m.kind = MarginalKind::Exponential;
        m.p1 = arg(0, 1.0);
        m.p2 = arg(1, 0.0);
        if (m.p1 <= 0.0) throw ConfigError("exponential rate must be > 0: " + text);
    } else if (name == "student-t" || name == "t") {
        m.kind = MarginalKind::StudentT;
        m.p1 = arg(0, 3.0);
        m.p2 = 0.0;
        if (m.p1 <= 0.0) throw ConfigError("student-t nu must be > 0: " + text);
    } else if (name == "pareto") {
        m.kind = MarginalKind::Pareto;
        m.p1 = arg(0, 3.0);
        m.p2 = 0.0;
        if (m.p1 <= 0.0) throw ConfigError("pareto alpha must be > 0: " + text);
    } else {
        throw ConfigError("unknown marginal kind: " + text);
    }
    return m;
}

// ---------------------------------------------------------------------------
// DistributionSpec

FamilyKind parse_family(const std::string& name) {
    if (name == "gaussian" || name == "normal") return FamilyKind::Gaussian;
    if (name == "product-laplace") return FamilyKind::ProductLaplace;
    if (name == "product-exponential" || name == "product-exponential-shifted")
        return FamilyKind::ProductExponential;
    if (name == "radial-exponential") return FamilyKind::RadialExponential;
    if (name == "product-student-t" || name == "student-t") return FamilyKind::ProductStudentT;
    if (name == "spherical-student-t") return FamilyKind::SphericalStudentT;
    if (name == "product-pareto" || name == "pareto") return FamilyKind::ProductPareto;
    if (name == "rotated-product") return FamilyKind::RotatedProduct;
    throw ConfigError("unknown distribution family: " + name);
}

std::string DistributionSpec::family_name() const {
    switch (family) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::ProductLaplace: return "product-laplace";
        case FamilyKind::ProductExponential: return "product-exponential";
        case FamilyKind::RadialExponential: return "radial-exponential";
        case FamilyKind::ProductStudentT: return "product-student-t";
        case FamilyKind::SphericalStudentT: return "spherical-student-t";
        case FamilyKind::ProductPareto: return "product-pareto";
        case FamilyKind::RotatedProduct: return "rotated-product";
    }
    return "";
}

void DistributionSpec::validate() const {
    if (dim < 1) throw ConfigError("distribution dim must be >= 1");
    switch (family) {
        case FamilyKind::Gaussian: {
            if (mean.size() != 0 && mean.size() != dim)
                throw ConfigError("gaussian mean length != dim");
            if (cov.size() != 0) {
                if (cov.rows() != dim || cov.cols() != dim)
                    throw ConfigError("gaussian covariance must be dim x dim");
                if (!cov.isApprox(cov.transpose(), 1e-12))
                    throw ConfigError("gaussian covariance must be symmetric");
                Eigen::LLT<Eigen::MatrixXd> llt(cov);
                if (llt.info() != Eigen::Success)
                    throw ConfigError("gaussian covariance must be positive definite");
            }
            break;
        }
        case FamilyKind::ProductLaplace:
            if (scale <= 0.0) throw ConfigError("laplace scale must be > 0");
            break;
        case FamilyKind::ProductExponential:
            if (rate <= 0.0) throw ConfigError("exponential rate must be > 0");
            break;
        case FamilyKind::RadialExponential:
            break;
        case FamilyKind::ProductStudentT:
        case FamilyKind::SphericalStudentT:
            if (nu <= 0.0) throw ConfigError("student-t nu must be > 0");
            break;
        case FamilyKind::ProductPareto:
            if (alpha <= 0.0) throw ConfigError("pareto alpha must be > 0");
            break;
        case FamilyKind::RotatedProduct: {
            if (static_cast<int>(marginals.size()) != dim)
                throw ConfigError("rotated-product needs exactly dim marginals");
            if (rotation.rows() != dim || rotation.cols() != dim)
                throw ConfigError("rotated-product rotation must be dim x dim");
            const double err =
                (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(dim, dim))
                    .cwiseAbs()
                    .maxCoeff();
            // 5e-3 admits matrices printed to four decimal places.
            if (err > 5e-3)
                throw ConfigError("rotated-product matrix is not orthogonal (error " +
                                  format_param(err) + ")");
            break;
        }
    }
}

namespace {

Eigen::MatrixXd resolve_rotation(const std::string& desc, int dim) {
    if (desc == "reference-3d") {
        if (dim != 3) throw ConfigError("reference-3d rotation requires dim = 3");
        return reference_rotation_3d().m;
    }
    if (desc.rfind("haar:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(desc.substr(5));
        } catch (const std::exception&) {
            throw ConfigError("malformed haar rotation seed: " + desc);
        }
        return haar_rotation(dim, seed).m;
    }
    return parse_matrix_rows(desc);
}

}  // namespace

DistributionSpec DistributionSpec::from_config(const Config& cfg, const std::string& section) {
    const std::string prefix = section.empty() ? "" : section + ".";
    DistributionSpec spec;
    spec.family = parse_family(cfg.get_string(prefix + "family"));
    spec.dim = static_cast<int>(cfg.get_int(prefix + "dim", 2));
    switch (spec.family) {
        case FamilyKind::Gaussian:
            if (cfg.has(prefix + "mean")) spec.mean = parse_vector(cfg.get_string(prefix + "mean"));
            if (cfg.has(prefix + "cov")) {
                const std::string text = cfg.get_string(prefix + "cov");
                if (text.find(';') != std::string::npos) {
                    spec.cov = parse_matrix_rows(text);
                } else {
                    const Eigen::VectorXd diag = parse_vector(text);
                    spec.cov = diag.asDiagonal();
                }
            }
            if (spec.mean.size() > 0) spec.dim = static_cast<int>(spec.mean.size());
            if (spec.cov.size() > 0) spec.dim = static_cast<int>(spec.cov.rows());
            break;
        case FamilyKind::ProductLaplace:
            spec.scale = cfg.get_double(prefix + "scale", 1.0);
            break;
        case FamilyKind::ProductExponential:
            spec.rate = cfg.get_double(prefix + "rate", 1.0);
            spec.shift = cfg.get_double(prefix + "shift", 0.0);
            break;
        case FamilyKind::RadialExponential:
            break;
        case FamilyKind::ProductStudentT:
        case FamilyKind::SphericalStudentT:
            spec.nu = cfg.get_double(prefix + "nu", 3.0);
            break;
        case FamilyKind::ProductPareto:
            spec.alpha = cfg.get_double(prefix + "alpha", 3.0);
            break;
        case FamilyKind::RotatedProduct: {
            for (const auto& tok : split_list(cfg.get_string(prefix + "marginals")))
                spec.marginals.push_back(Marginal::parse(tok));
            spec.dim = static_cast<int>(spec.marginals.size());
            spec.rotation_desc = cfg.get_string(prefix + "rotation", "reference-3d");
            spec.rotation = resolve_rotation(spec.rotation_desc, spec.dim);
            break;
        }
    }
    spec.validate();
    return spec;
}

void DistributionSpec::to_config(Config& cfg, const std::string& section) const {
    const std::string prefix = section.empty() ? "" : section + ".";
    cfg.set(prefix + "family", family_name());
    cfg.set_int(prefix + "dim", dim);
    switch (family) {
        case FamilyKind::Gaussian:
            if (mean.size() > 0) cfg.set(prefix + "mean", serialize_vector(mean));
            if (cov.size() > 0) cfg.set(prefix + "cov", serialize_matrix_rows(cov));
            break;
        case FamilyKind::ProductLaplace:
            cfg.set_double(prefix + "scale", scale);
            break;
        case FamilyKind::ProductExponential:
            cfg.set_double(prefix + "rate", rate);
            cfg.set_double(prefix + "shift", shift);
            break;
        case FamilyKind::RadialExponential:
            break;
        case FamilyKind::ProductStudentT:
        case FamilyKind::SphericalStudentT:
            cfg.set_double(prefix + "nu", nu);
            break;
        case FamilyKind::ProductPareto:
            cfg.set_double(prefix + "alpha", alpha);
            break;
        case FamilyKind::RotatedProduct: {
            std::string ms;
            for (std::size_t i = 0; i < marginals.size(); ++i) {
                if (i) ms += ", ";
                ms += marginals[i].to_string();
            }
            cfg.set(prefix + "marginals", ms);
            cfg.set(prefix + "rotation",
                    rotation_desc.empty() ? serialize_matrix_rows(rotation) : rotation_desc);
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling

PointCloud sample(const DistributionSpec& spec, std::int64_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ConfigError("sample size must be >= 1");
    const int d = spec.dim;
    Rng rng(seed, 0xD15u);
    PointCloud cloud;
    cloud.pts.resize(static_cast<Eigen::Index>(n), d);
    switch (spec.family) {
        case FamilyKind::Gaussian: {
            Eigen::VectorXd mu = spec.mean.size() > 0 ? spec.mean : Eigen::VectorXd::Zero(d);
            Eigen::MatrixXd chol;
            if (spec.cov.size() > 0)
                chol = Eigen::LLT<Eigen::MatrixXd>(spec.cov).matrixL();
            else
                chol = Eigen::MatrixXd::Identity(d, d);
            Eigen::VectorXd z(d);
            for (std::int64_t i = 0; i < n; ++i) {
                for (int j = 0; j < d; ++j) z(j) = rng.gaussian();
                cloud.pts.row(i) = (mu + chol * z).transpose();
            }
            break;
        }
        case FamilyKind::ProductLaplace:
            for (std::int64_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) cloud.pts(i, j) = rng.laplace(spec.scale);
            break;
        case FamilyKind::ProductExponential:
            for (std::int64_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) cloud.pts(i, j) = spec.shift + rng.exponential(spec.rate);
            break;
        case FamilyKind::RadialExponential: {
            // Radial density r^{d-1} e^{-r} / (d-1)!, i.e. Gamma(d, 1).
            Eigen::VectorXd w(d);
            for (std::int64_t i = 0; i < n; ++i) {
                double norm = 0.0;
                do {
                    for (int j = 0; j < d; ++j) w(j) = rng.gaussian();
                    norm = w.norm();
                } while (norm == 0.0);
                const double r = rng.gamma(static_cast<double>(d));
                cloud.pts.row(i) = (r / norm) * w.transpose();
            }
            break;
        }
        case FamilyKind::ProductStudentT:
            for (std::int64_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) cloud.pts(i, j) = rng.student_t(spec.nu);
            break;
        case FamilyKind::SphericalStudentT: {
            // Shared chi-square denominator per point keeps projections t_nu.
            for (std::int64_t i = 0; i < n; ++i) {
                const double denom = std::sqrt(rng.chi_square(spec.nu) / spec.nu);
                for (int j = 0; j < d; ++j) cloud.pts(i, j) = rng.gaussian() / denom;
            }
            break;
        }
        case FamilyKind::ProductPareto:
            for (std::int64_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) cloud.pts(i, j) = rng.pareto(spec.alpha);
            break;
        case FamilyKind::RotatedProduct: {
            Eigen::VectorXd y(d);
            for (std::int64_t i = 0; i < n; ++i) {
                for (int j = 0; j < d; ++j) y(j) = spec.marginals[static_cast<std::size_t>(j)].sample(rng);
                // X = A^T Y, so the rotated data satisfies Y = A X.
                cloud.pts.row(i) = (spec.rotation.transpose() * y).transpose();
            }
            break;
        }
    }
    return cloud;
}

// ---------------------------------------------------------------------------
// Population depth

namespace {

struct RadialSurvivalParams {
    int d;
    double s;
};

double radial_survival_integrand(double r, void* raw) {
    const auto* p = static_cast<const RadialSurvivalParams*>(raw);
    // f_R(r) = r^{d-1} e^{-r} / Gamma(d); P(W1 >= u) = I_{1-u^2}((d-1)/2, 1/2) / 2.
    const double u = p->s / r;
    if (u >= 1.0) return 0.0;
    const double fr = std::exp((p->d - 1) * std::log(r) - r - gsl_sf_lngamma(p->d));
    double tail_w;
    if (p->d == 1) {
        tail_w = 0.5;  // W1 = ±1 with equal probability; u < 1 means only +1 counts
    } else {
        tail_w = 0.5 * gsl_sf_beta_inc(0.5 * (p->d - 1), 0.5, 1.0 - u * u);
    }
    return fr * tail_w;
}

}  // namespace

double radial_exponential_projection_survival(int d, double s) {
    if (d < 1) throw ConfigError("dimension must be >= 1");
    if (s <= 0.0) {
        // By symmetry P(S >= s) = 1 - P(S >= -s) for s < 0; at 0 it is 1/2.
        if (s == 0.0) return 0.5;
        return 1.0 - radial_exponential_projection_survival(d, -s);
    }
    disable_gsl_abort();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
    RadialSurvivalParams params{d, s};
    gsl_function f;
    f.function = &radial_survival_integrand;
    f.params = &params;
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qagiu(&f, s, 1e-12, 1e-10, 4096, ws, &result, &abserr);
    gsl_integration_workspace_free(ws);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
        throw DataError("projection survival quadrature failed (status " + std::to_string(status) + ")");
    return result;
}

bool has_closed_form_depth(const DistributionSpec& spec) {
    switch (spec.family) {
        case FamilyKind::Gaussian:
        case FamilyKind::RadialExponential:
        case FamilyKind::SphericalStudentT:
            return true;
        default:
            return false;
    }
}

PopulationDepth population_depth(const DistributionSpec& spec, const Vector& x,
                                 const PopulationDepthOptions& opts) {
    spec.validate();
    if (x.size() != spec.dim) throw ConfigError("query dimension mismatch");
    PopulationDepth out;
    switch (spec.family) {
        case FamilyKind::Gaussian: {
            const Eigen::VectorXd mu =
                spec.mean.size() > 0 ? spec.mean : Eigen::VectorXd::Zero(spec.dim);
            Eigen::MatrixXd sigma = spec.cov.size() > 0
                                        ? spec.cov
                                        : Eigen::MatrixXd::Identity(spec.dim, spec.dim);
            const Eigen::VectorXd delta = x - mu;
            const double maha = std::sqrt(delta.dot(sigma.llt().solve(delta)));
            out.value = gauss_cdf(-maha);
            out.exact = true;
            return out;
        }
        case FamilyKind::RadialExponential: {
            out.value = radial_exponential_projection_survival(spec.dim, x.norm());
            out.exact = true;
            return out;
        }
        case FamilyKind::SphericalStudentT: {
            disable_gsl_abort();
            out.value = gsl_cdf_tdist_P(-x.norm(), spec.nu);
            out.exact = true;
            return out;
        }
        default:
            break;
    }
    // Monte-Carlo: depth of x within a large sampled cloud, restricted to a
    // finite direction budget. Always an upper-ish estimate of the true
    // minimum; the binomial standard error is taken at the minimizer.
    const PointCloud cloud = sample(spec, opts.mc_samples, opts.seed);
    const DirectionSet dirs = default_direction_set(spec.dim, opts.seed ^ 0xd1f5u, opts.directions);
    const DepthValue dv = depth_approx(cloud.pts, x, dirs.dirs);
    out.value = dv.value();
    out.se = std::sqrt(std::max(out.value * (1.0 - out.value), 1.0 / static_cast<double>(dv.n)) /
                       static_cast<double>(dv.n));
    out.exact = false;
    out.precision_met = out.se <= opts.tol;
    return out;
}

// ---------------------------------------------------------------------------
// Tail lower bound

double TailBoundG::operator()(double R) const {
    switch (form) {
        case Form::Gauss:
            return std::exp(-0.5 * R * R);
        case Form::Exp:
            return std::exp(-R);
        case Form::Power:
            return std::pow(std::max(R, 1.0), -alpha);
    }
    return 0.0;
}

std::string TailBoundG::to_string() const {
    switch (form) {
        case Form::Gauss:
            return "exp(-R^2/2)";
        case Form::Exp:
            return "exp(-R)";
        case Form::Power:
            return "R^-" + format_param(alpha);
    }
    return "";
}

bool has_tail_lower_bound(const DistributionSpec& spec) {
    switch (spec.family) {
        case FamilyKind::RadialExponential:
            return true;
        case FamilyKind::ProductPareto:
            return true;
        case FamilyKind::Gaussian: {
            if (spec.mean.size() > 0 && spec.mean.cwiseAbs().maxCoeff() > 0.0) return false;
            if (spec.cov.size() > 0 &&
                (spec.cov - Eigen::MatrixXd::Identity(spec.dim, spec.dim)).cwiseAbs().maxCoeff() >
                    1e-12)
                return false;
            return true;
        }
        default:
            return false;
    }
}

TailBoundG tail_lower_bound(const DistributionSpec& spec) {
    if (!has_tail_lower_bound(spec))
        throw ConfigError("no tail lower-bound form for family " + spec.family_name());
    TailBoundG g;
    switch (spec.family) {
        case FamilyKind::RadialExponential:
            g.form = TailBoundG::Form::Exp;
            break;
        case FamilyKind::Gaussian:
            g.form = TailBoundG::Form::Gauss;
            break;
        case FamilyKind::ProductPareto:
            g.form = TailBoundG::Form::Power;
            g.alpha = spec.alpha;
            break;
        default:
            break;
    }
    return g;
}

}  // namespace tailhd
