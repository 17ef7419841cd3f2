// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailhd/csv.hpp"
#include "tailhd/depth.hpp"
#include "tailhd/directions.hpp"
#include "tailhd/distributions.hpp"
#include "tailhd/schedules.hpp"
#include "tailhd/types.hpp"

namespace tailhd {

// ---------------------------------------------------------------------------
// Depth decay curves along rays.

struct CurveRow {
    int k = 0;
    std::int64_t n = 0;
    double t = 0.0;
    DepthValue depth{0, 0};
    double y = 0.0;  // log(1/depth)/t, valid iff y_defined
    double w = 0.0;  // log(1/depth)/log t, valid iff w_defined
    bool y_defined = false;
    bool w_defined = false;
    bool out_of_hull = false;  // depth numerator 0: query left the data hull
};

struct HDCurve {
    Vector direction;
    std::vector<CurveRow> rows;
};

struct CurveOptions {
    // Direction set for d >= 3 (and for d = 2 when use_exact_2d is off).
    // Null selects a seeded default set.
    const DirectionSet* dirs = nullptr;
    bool use_exact_2d = true;
    int threads = 1;
};

// Depth of t_k * direction within the first n_k sample rows, never reshuffled.
// d=1 and d=2 are exact; higher dimensions use the projection approximation.
HDCurve hd_curve(const PointCloud& cloud, const Vector& direction, const Schedule& schedule,
                 const CurveOptions& opts = {});

// Same, for several rays at once; approximate projections are shared, so this
// is much cheaper than one hd_curve call per ray when d >= 3.
std::vector<HDCurve> hd_curves(const PointCloud& cloud, const Matrix& rays,
                               const Schedule& schedule, const CurveOptions& opts = {});

// Depth numerators of per-checkpoint query batches against growing sample
// prefixes, minimized over a fixed direction set. Equals depth_approx row by
// row, at O((N + Q) log N) per direction instead of O(N) per (query, prefix).
// queries[c] holds the query points (rows) evaluated at prefix checkpoints[c].
std::vector<std::vector<DepthValue>> prefix_depths(const PointCloud& cloud,
                                                   const DirectionSet& dirs,
                                                   const std::vector<std::int64_t>& checkpoints,
                                                   const std::vector<Matrix>& queries,
                                                   int threads = 1);

// Fills y, w, the defined flags and out_of_hull from depth and t.
void apply_transforms(CurveRow& row);

CsvTable curve_table(const HDCurve& curve);

// ---------------------------------------------------------------------------
// Tail classification.

enum class TailLabel { LightSuperExp, LightExp, LightSubExp, Heavy, Inconclusive };

std::string to_string(TailLabel label);

struct ClassifierConfig {
    double y_window = 0.4;   // trailing fraction of usable rows for y-trend fits
    double w_window = 0.6;   // trailing fraction for w-branch fits
    double rel_tol = 0.15;   // fitted relative change within +-rel_tol counts as flat
    double sig_mult = 2.0;   // slope must exceed sig_mult * SE to count as a trend
    double eps_y = 0.05;     // minimal trailing mean of y for a light-exp call
    double eps_w = 0.05;     // minimal heavy index
    double rms_ratio = 0.5;  // a decay template is decisive when its rms beats the rival's by this factor
    double se_frac = 0.15;   // prefer the 3-term index when its SE is below se_frac * |theta|
    int min_rows = 10;       // usable rows required before any call
    int w_min_rows = 15;     // rows required for index estimation (w branch)
    double w_t_min = 1.2;    // w-branch fits ignore rows with t below this

    static ClassifierConfig from_config(const Config& cfg, const std::string& section = "classifier");
};

struct TailVerdict {
    Vector direction;
    TailLabel label = TailLabel::Inconclusive;
    double rate = 0.0;     // decay rate (light-exp) or tail index theta (heavy)
    double rate_se = 0.0;
    bool rate_defined = false;
    double theta_ls = 0.0;  // cross-check: LS slope of log(1/depth) vs log t
    bool theta_ls_defined = false;
    double window = 0.0;    // trailing fraction actually used
    int usable_rows = 0;
    std::string reason;     // why this label, or why inconclusive
};

TailVerdict classify_direction(const HDCurve& curve, const ClassifierConfig& cfg = {});

enum class OverallLabel { HeavyTailed, LightAlongSomeDirection, Inconclusive };

std::string to_string(OverallLabel label);

struct DatasetVerdict {
    std::vector<TailVerdict> verdicts;
    OverallLabel overall = OverallLabel::Inconclusive;
    // Heavy overall with some directions inconclusive: coverage is partial.
    bool coverage_warning = false;
};

DatasetVerdict classify_dataset(const std::vector<TailVerdict>& verdicts);

std::string verdict_report(const DatasetVerdict& verdict);

// ---------------------------------------------------------------------------
// Bound checks.

// min over basis rows e_i of the univariate depth of <t*x, e_i> within the
// projected sample; an upper bound for the depth of t*x itself.
double marginal_upper_bound(const PointCloud& cloud, const Matrix& basis, const Vector& x,
                            double t);

struct SandwichRow {
    int k = 0;
    std::int64_t n = 0;
    double t = 0.0;
    double depth = 0.0;
    double ref = 0.0;  // g(t * |x|)
    bool fit_half = false;
    bool inside = false;
};

struct SandwichReport {
    TailBoundG g;
    double c = 0.0;  // lower envelope constant
    double C = 0.0;  // upper envelope constant
    std::vector<SandwichRow> rows;
    int fit_rows = 0;
    int validate_rows = 0;
    int violations = 0;
    double fraction_inside = 0.0;
};

// Fits c, C on the first half of the usable range so that
// c g(t|x|) <= depth <= C g(t|x|), then validates on the second half.
// Throws DataError when depth reaches 0 inside the fitting half.
SandwichReport sandwich_check(const PointCloud& cloud, const DistributionSpec& spec,
                              const Vector& x, const Schedule& schedule,
                              const CurveOptions& opts = {});

// ---------------------------------------------------------------------------
// Empirical-over-population ratio experiment.

struct RatioOptions {
    double min_population_depth = 0.05;  // grid points below this are excluded
    int directions = 256;                // projection budget for empirical depth
    int threads = 1;
};

struct RatioRow {
    int k = 0;
    std::int64_t n = 0;
    double t = 0.0;
    double sup_ratio = 0.0;  // max |empirical/population - 1| over included points
    int included = 0;
    int excluded = 0;
};

struct RatioSeries {
    std::uint64_t seed = 0;
    std::vector<Vector> grid;
    std::vector<RatioRow> rows;
};

// Grid over the centered ball of radius eps with the given spacing; each grid
// point x is tracked at query t_k * x against the growing sample prefix.
// Requires a closed-form population oracle (throws ConfigError otherwise).
RatioSeries ratio_experiment(const DistributionSpec& spec, double eps, const Schedule& schedule,
                             double grid_spacing, std::uint64_t seed,
                             const RatioOptions& opts = {});

// ---------------------------------------------------------------------------
// Elliptical symmetry probe.

struct SymmetryRow {
    double t = 0.0;
    double max_deviation = 0.0;  // max over pairs of |HD(tx)/HD(ty) - 1|
    int pairs_used = 0;
    int pairs_dropped = 0;  // zero depth on either side
};

std::vector<SymmetryRow> symmetry_probe(const PointCloud& cloud, const Eigen::MatrixXd& sigma,
                                        const std::vector<double>& t_grid,
                                        const std::vector<std::pair<Vector, Vector>>& pairs,
                                        const CurveOptions& opts = {});

// ---------------------------------------------------------------------------
// QQ data and the MRV-normalized curve.

struct QQPoint {
    double p = 0.0;          // plotting position (i - 1/2) / n
    double reference = 0.0;  // reference quantile at p
    double sample = 0.0;     // i-th order statistic
};

std::vector<QQPoint> qq_data(std::vector<double> sample, const Marginal& reference);

struct MrvRow {
    int k = 0;
    std::int64_t n = 0;
    double t = 0.0;
    double depth = 0.0;
    double survival = 0.0;    // empirical fraction of prefix points with norm > t
    double normalized = 0.0;  // depth / survival, valid iff !flagged
    bool flagged = false;
};

// Stabilization of depth(t_n x, P_n) / S_n(t_n) is the finite-sample surrogate
// for convergence of the normalized depth under regular variation.
std::vector<MrvRow> mrv_normalized_curve(const PointCloud& cloud, const Vector& x,
                                         const Schedule& schedule, const CurveOptions& opts = {});

}  // namespace tailhd
