// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "doctest.h"
#include "tailhd/diagnostics.hpp"
#include "util.hpp"

using namespace tailhd;
using tailhd::testing::gaussian_cloud;
using tailhd::testing::vec2;

namespace {

// Noiseless decay curve on a t grid with a huge denominator, so the
// classifier sees the ideal transforms.
HDCurve make_curve(const std::vector<double>& ts, const std::function<double(double)>& depth_of) {
    HDCurve curve;
    curve.direction = vec2(1, 0);
    constexpr std::int64_t kDen = 1000000000000LL;
    int k = 0;
    for (const double t : ts) {
        CurveRow row;
        row.k = ++k;
        row.n = 1000 * k;
        row.t = t;
        row.depth = DepthValue{std::llround(depth_of(t) * static_cast<double>(kDen)), kDen};
        apply_transforms(row);
        curve.rows.push_back(row);
    }
    return curve;
}

std::vector<double> t_grid(int count, double step) {
    std::vector<double> ts;
    for (int k = 1; k <= count; ++k) ts.push_back(step * k);
    return ts;
}

}  // namespace

TEST_CASE("transforms define y and w exactly where the contract says") {
    CurveRow row;
    row.t = 2.0;
    row.depth = DepthValue{25, 100};
    apply_transforms(row);
    CHECK_FALSE(row.out_of_hull);
    REQUIRE(row.y_defined);
    REQUIRE(row.w_defined);
    CHECK(doctest::Approx(row.y).epsilon(1e-14) == std::log(4.0) / 2.0);
    CHECK(doctest::Approx(row.w).epsilon(1e-14) == 2.0);  // log 4 / log 2
    // Inverse identities.
    CHECK(doctest::Approx(std::exp(-row.y * row.t)).epsilon(1e-12) == 0.25);
    CHECK(doctest::Approx(std::pow(row.t, -row.w)).epsilon(1e-12) == 0.25);

    CurveRow at_one = row;
    at_one.t = 1.0;
    apply_transforms(at_one);
    CHECK(at_one.y_defined);  // y needs t > 0
    CHECK_FALSE(at_one.w_defined);  // w needs t > 1
    CHECK(std::isnan(at_one.w));

    CurveRow dead = row;
    dead.depth = DepthValue{0, 100};
    apply_transforms(dead);
    CHECK(dead.out_of_hull);
    CHECK_FALSE(dead.y_defined);
    CHECK_FALSE(dead.w_defined);
    CHECK(std::isnan(dead.y));

    CurveRow full = row;
    full.depth = DepthValue{100, 100};
    apply_transforms(full);
    CHECK(full.y == 0.0);
    CHECK(full.w == 0.0);
}

TEST_CASE("hd_curve rows equal direct prefix depths in the plane") {
    const PointCloud cloud = gaussian_cloud(200, 2, 6);
    const Schedule schedule = Schedule::build(200, 5, t_schedule_linear(50.0));
    const Vector u = vec2(std::sqrt(0.5), std::sqrt(0.5));
    const HDCurve curve = hd_curve(cloud, u, schedule);
    REQUIRE(curve.rows.size() == schedule.rows.size());
    for (std::size_t c = 0; c < curve.rows.size(); ++c) {
        const CurveRow& row = curve.rows[c];
        CHECK(row.k == schedule.rows[c].k);
        CHECK(row.n == schedule.rows[c].n);
        CHECK(row.t == schedule.rows[c].t);
        const DepthValue direct = depth_exact_2d(cloud.pts.topRows(row.n), row.t * u);
        CHECK(row.depth.numerator == direct.numerator);
        CHECK(row.depth.n == direct.n);
    }
}

TEST_CASE("hd_curves shares projections without changing any answer") {
    const PointCloud cloud = gaussian_cloud(400, 3, 2);
    const Schedule schedule = Schedule::build(400, 4, t_schedule_linear(200.0));
    const DirectionSet dirs = default_direction_set(3, 1, 128);
    CurveOptions opts;
    opts.dirs = &dirs;
    Matrix rays(3, 3);
    rays << 1, 0, 0, 0, 1, 0, std::sqrt(1.0 / 3), std::sqrt(1.0 / 3), std::sqrt(1.0 / 3);

    const std::vector<HDCurve> bundle = hd_curves(cloud, rays, schedule, opts);
    REQUIRE(bundle.size() == 3);
    for (int r = 0; r < 3; ++r) {
        const HDCurve lone = hd_curve(cloud, rays.row(r).transpose(), schedule, opts);
        REQUIRE(bundle[r].rows.size() == lone.rows.size());
        for (std::size_t c = 0; c < lone.rows.size(); ++c)
            CHECK(bundle[r].rows[c].depth.numerator == lone.rows[c].depth.numerator);
    }

    // Thread count must not change results (minima are order independent).
    CurveOptions threaded = opts;
    threaded.threads = 2;
    const std::vector<HDCurve> par = hd_curves(cloud, rays, schedule, threaded);
    for (int r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < par[r].rows.size(); ++c)
            CHECK(par[r].rows[c].depth.numerator == bundle[r].rows[c].depth.numerator);

    Matrix bad(1, 2);
    bad << 1, 0;
    CHECK_THROWS_AS(hd_curves(cloud, bad, schedule, opts), ConfigError);
    const Schedule too_long = Schedule::build(500, 5, t_schedule_linear(100.0));
    CHECK_THROWS_AS(hd_curves(cloud, rays, too_long, opts), ConfigError);
}

TEST_CASE("prefix depths equal the directional bound on every prefix") {
    const PointCloud cloud = gaussian_cloud(300, 3, 15);
    const DirectionSet dirs = default_direction_set(3, 2, 64);
    const std::vector<std::int64_t> checkpoints = {60, 150, 300};
    std::vector<Matrix> queries;
    Rng rng(4);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        Matrix q(3, 3);
        for (Eigen::Index i = 0; i < q.size(); ++i)
            q(i / 3, i % 3) = 2.0 * rng.gaussian();
        queries.push_back(q);
    }
    const auto depths = prefix_depths(cloud, dirs, checkpoints, queries);
    REQUIRE(depths.size() == checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        REQUIRE(depths[c].size() == 3);
        for (Eigen::Index r = 0; r < 3; ++r) {
            const DepthValue direct = depth_approx(cloud.pts.topRows(checkpoints[c]),
                                                   queries[c].row(r).transpose(), dirs.dirs);
            CHECK(depths[c][static_cast<std::size_t>(r)].numerator == direct.numerator);
            CHECK(depths[c][static_cast<std::size_t>(r)].n == direct.n);
        }
    }

    // Contract violations.
    CHECK_THROWS_AS(prefix_depths(cloud, dirs, {150, 60}, {queries[0], queries[1]}), ConfigError);
    CHECK_THROWS_AS(prefix_depths(cloud, dirs, {400}, {queries[0]}), ConfigError);
    CHECK_THROWS_AS(prefix_depths(cloud, dirs, {60}, {}), ConfigError);
    const DirectionSet wrong = default_direction_set(2, 2, 8);
    CHECK_THROWS_AS(prefix_depths(cloud, wrong, {60}, {queries[0]}), ConfigError);
}

TEST_CASE("curve tables carry the documented flag bits") {
    HDCurve curve;
    curve.direction = vec2(1, 0);
    const std::vector<std::pair<double, DepthValue>> shape = {
        {0.5, DepthValue{5, 10}},   // w undefined at t <= 1
        {2.0, DepthValue{5, 20}},   // fully defined
        {3.0, DepthValue{0, 30}},   // out of hull
    };
    int k = 0;
    for (const auto& [t, depth] : shape) {
        CurveRow row;
        row.k = ++k;
        row.n = 10 * k;
        row.t = t;
        row.depth = depth;
        apply_transforms(row);
        curve.rows.push_back(row);
    }
    const CsvTable table = curve_table(curve);
    REQUIRE(table.header.size() == 7);
    CHECK(table.header[0] == "k");
    CHECK(table.header[3] == "depth");
    CHECK(table.header[6] == "flags");
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0][6] == 4.0);  // w bit only
    CHECK(table.rows[1][6] == 0.0);
    CHECK(table.rows[2][6] == 7.0);  // out of hull sets all three bits
    CHECK(table.rows[0][3] == 0.5);
    CHECK(table.rows[1][3] == 0.25);
    CHECK(table.rows[2][3] == 0.0);
    CHECK(std::isnan(table.rows[2][4]));  // y column carries nan when undefined
}

TEST_CASE("classifier labels ideal decay curves correctly") {
    // Pure exponential decay: y flat at the rate.
    const HDCurve exp_curve =
        make_curve(t_grid(30, 0.5), [](double t) { return std::exp(-1.3 * t); });
    const TailVerdict ve = classify_direction(exp_curve);
    CHECK(ve.label == TailLabel::LightExp);
    REQUIRE(ve.rate_defined);
    CHECK(doctest::Approx(ve.rate).epsilon(0.05) == 1.3);
    CHECK(ve.usable_rows == 30);

    // Gaussian-type decay: y = t/2 keeps rising.
    const HDCurve gauss_curve =
        make_curve(t_grid(30, 0.2), [](double t) { return std::exp(-0.5 * t * t); });
    CHECK(classify_direction(gauss_curve).label == TailLabel::LightSuperExp);

    // Stretched-exponential decay: w rises and the sqrt template fits.
    const HDCurve sub_curve =
        make_curve(t_grid(50, 1.0), [](double t) { return std::exp(-3.0 * std::sqrt(t)); });
    CHECK(classify_direction(sub_curve).label == TailLabel::LightSubExp);

    // Polynomial decay: w flat at the tail index.
    const HDCurve heavy_curve =
        make_curve(t_grid(50, 1.0), [](double t) { return std::pow(t, -2.5); });
    const TailVerdict vh = classify_direction(heavy_curve);
    CHECK(vh.label == TailLabel::Heavy);
    REQUIRE(vh.rate_defined);
    CHECK(doctest::Approx(vh.rate).epsilon(0.05) == 2.5);
    REQUIRE(vh.theta_ls_defined);
    CHECK(doctest::Approx(vh.theta_ls).epsilon(0.05) == 2.5);

    // Too few usable rows refuses to call.
    const HDCurve shorty = make_curve(t_grid(6, 1.0), [](double t) { return std::exp(-t); });
    const TailVerdict vs = classify_direction(shorty);
    CHECK(vs.label == TailLabel::Inconclusive);
    CHECK(vs.reason.find("usable rows") != std::string::npos);
}

TEST_CASE("classifier thresholds come from config with defaults") {
    const ClassifierConfig dflt;
    const Config cfg = Config::parse_string("[classifier]\nmin_rows = 4\neps_y = 0.01\n");
    const ClassifierConfig c = ClassifierConfig::from_config(cfg);
    CHECK(c.min_rows == 4);
    CHECK(c.eps_y == 0.01);
    CHECK(c.y_window == dflt.y_window);
    CHECK(c.w_min_rows == dflt.w_min_rows);

    // With the lower row floor the short curve becomes classifiable.
    const HDCurve shorty = make_curve(t_grid(6, 1.0), [](double t) { return std::exp(-t); });
    CHECK(classify_direction(shorty, c).label == TailLabel::LightExp);
}

TEST_CASE("dataset verdicts aggregate direction labels") {
    TailVerdict light, heavy, none;
    light.label = TailLabel::LightExp;
    heavy.label = TailLabel::Heavy;
    none.label = TailLabel::Inconclusive;

    const DatasetVerdict a = classify_dataset({heavy, light});
    CHECK(a.overall == OverallLabel::LightAlongSomeDirection);
    CHECK_FALSE(a.coverage_warning);

    const DatasetVerdict b = classify_dataset({heavy, none});
    CHECK(b.overall == OverallLabel::HeavyTailed);
    CHECK(b.coverage_warning);

    const DatasetVerdict c = classify_dataset({none, none});
    CHECK(c.overall == OverallLabel::Inconclusive);

    CHECK_THROWS_AS(classify_dataset({}), ConfigError);

    heavy.rate = 2.5;
    heavy.rate_defined = true;
    heavy.direction = vec2(1, 0);
    none.direction = vec2(0, 1);
    const std::string report = verdict_report(classify_dataset({heavy, none}));
    CHECK(report.find("overall: heavy-tailed") != std::string::npos);
    CHECK(report.find("coverage warning") != std::string::npos);
    CHECK(report.find("index 2.5") != std::string::npos);
}

TEST_CASE("marginal bound dominates the exact depth") {
    Matrix sq(4, 2);
    sq << 1, 1, 1, -1, -1, 1, -1, -1;
    const PointCloud square{sq};
    const Matrix basis = Matrix::Identity(2, 2);
    CHECK(doctest::Approx(marginal_upper_bound(square, basis, vec2(1, 0), 0.5)).epsilon(1e-12) ==
          0.5);

    const PointCloud cloud = gaussian_cloud(250, 2, 44);
    for (double t : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const Vector x = vec2(0.8, -0.6);
        const double bound = marginal_upper_bound(cloud, basis, x, t);
        const double exact = depth_exact_2d(cloud.pts, t * x).value();
        CHECK(bound >= exact - 1e-12);
    }

    Matrix skew(2, 2);
    skew << 1, 1, 0, 1;
    CHECK_THROWS_AS(marginal_upper_bound(cloud, skew, vec2(1, 0), 1.0), ConfigError);
}

TEST_CASE("sandwich check brackets radial exponential decay") {
    DistributionSpec spec;
    spec.family = FamilyKind::RadialExponential;
    spec.dim = 2;
    const PointCloud cloud = sample(spec, 20000, 31);
    // Cap the query radius at t = 4 so the tail form e^{-t} is already a good
    // reference on the capped rows; the fit half still sees t = 1, 2, 3.
    TMap tmap = t_schedule_linear(1000.0);
    tmap.cap = 4.0;
    const Schedule schedule = Schedule::build(20000, 20, tmap);
    const Vector x = vec2(1, 0);
    const SandwichReport rep = sandwich_check(cloud, spec, x, schedule);
    CHECK(rep.g.form == TailBoundG::Form::Exp);
    REQUIRE(rep.rows.size() == schedule.rows.size());
    CHECK(rep.fit_rows + rep.validate_rows == static_cast<int>(rep.rows.size()));
    CHECK(rep.c > 0.0);
    CHECK(rep.C >= rep.c);
    for (int i = 0; i < rep.fit_rows; ++i) CHECK(rep.rows[static_cast<std::size_t>(i)].fit_half);
    for (std::size_t i = static_cast<std::size_t>(rep.fit_rows); i < rep.rows.size(); ++i)
        CHECK_FALSE(rep.rows[i].fit_half);
    // The 3 sigma envelope must hold on most of the validation half.
    CHECK(rep.fraction_inside >= 0.9);
    // Reference values really are exp(-t |x|).
    for (const auto& row : rep.rows)
        CHECK(doctest::Approx(row.ref).epsilon(1e-12) == std::exp(-row.t));

    // Depth hits zero inside the fitting half when t grows like n.
    const Schedule harsh = Schedule::build(20000, 10, t_schedule_linear(1.0));
    CHECK_THROWS_AS(sandwich_check(cloud, spec, x, harsh), DataError);
}

TEST_CASE("ratio experiment tracks the population oracle on a gaussian") {
    DistributionSpec spec;
    spec.family = FamilyKind::Gaussian;
    spec.dim = 2;
    const Schedule schedule = Schedule::build(4000, 4, t_schedule_gaussian(0.5));
    RatioOptions opts;
    opts.directions = 128;
    const RatioSeries series = ratio_experiment(spec, 1.0, schedule, 0.5, 3, opts);
    CHECK(series.seed == 3);
    CHECK(series.grid.size() == 13);  // lattice points of the unit ball at 0.5
    REQUIRE(series.rows.size() == schedule.rows.size());
    for (const auto& row : series.rows) {
        CHECK(row.included + row.excluded == static_cast<int>(series.grid.size()));
        CHECK(row.included > 0);
        CHECK(std::isfinite(row.sup_ratio));
        CHECK(row.sup_ratio >= 0.0);
    }
    // With thousands of points the empirical depth sits near the oracle.
    CHECK(series.rows.back().sup_ratio < 0.5);

    DistributionSpec lap;
    lap.family = FamilyKind::ProductLaplace;
    lap.dim = 2;
    CHECK_THROWS_AS(ratio_experiment(lap, 1.0, schedule, 0.5, 3, opts), ConfigError);
    CHECK_THROWS_AS(ratio_experiment(spec, -1.0, schedule, 0.5, 3, opts), ConfigError);
    CHECK_THROWS_AS(ratio_experiment(spec, 1.0, schedule, 0.0, 3, opts), ConfigError);
}

TEST_CASE("symmetry probe accepts matched pairs and rejects mismatched ones") {
    DistributionSpec spec;
    spec.family = FamilyKind::Gaussian;
    spec.dim = 2;
    spec.cov = Eigen::Vector2d(1.0, 0.25).asDiagonal();
    const PointCloud cloud = sample(spec, 4000, 8);
    // Under cov diag(1, 1/4) the norm |diag(1,2) x| is the equal-depth norm.
    Eigen::MatrixXd sigma = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    const std::vector<std::pair<Vector, Vector>> pairs = {{vec2(1, 0), vec2(0, 0.5)}};
    const auto rows = symmetry_probe(cloud, sigma, {0.5, 1.0}, pairs);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.pairs_used == 1);
        CHECK(row.pairs_dropped == 0);
        CHECK(row.max_deviation < 0.25);
    }

    const std::vector<std::pair<Vector, Vector>> bad = {{vec2(1, 0), vec2(0, 1)}};
    CHECK_THROWS_AS(symmetry_probe(cloud, sigma, {1.0}, bad), ConfigError);
    CHECK_THROWS_AS(symmetry_probe(cloud, sigma, {1.0}, {}), ConfigError);
    Eigen::MatrixXd notspd = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(symmetry_probe(cloud, notspd, {1.0}, pairs), ConfigError);
}

TEST_CASE("qq data pairs order statistics with reference quantiles") {
    const Marginal ref = Marginal::parse("gaussian(0,1)");
    const int n = 99;
    std::vector<double> sample;
    for (int i = n; i >= 1; --i)  // reversed input: qq_data must sort
        sample.push_back(ref.quantile((static_cast<double>(i) - 0.5) / n));
    const auto points = qq_data(sample, ref);
    REQUIRE(points.size() == static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) {
            CHECK(points[i].p > points[i - 1].p);
            CHECK(points[i].sample >= points[i - 1].sample);
        }
        // The sample was built from the same quantile map, so the plot is
        // exactly diagonal.
        CHECK(doctest::Approx(points[i].sample).epsilon(1e-12) == points[i].reference);
    }
    CHECK_THROWS_AS(qq_data({1.0}, ref), ConfigError);
}

TEST_CASE("mrv normalization divides depth by the prefix survival") {
    DistributionSpec spec;
    spec.family = FamilyKind::ProductPareto;
    spec.dim = 2;
    spec.alpha = 2.0;
    const PointCloud cloud = sample(spec, 3000, 12);
    const Schedule schedule = Schedule::build(3000, 6, t_schedule_mrv(0.5, 2.0));
    const Vector x = vec2(std::sqrt(0.5), std::sqrt(0.5));
    const auto rows = mrv_normalized_curve(cloud, x, schedule);
    REQUIRE(rows.size() == schedule.rows.size());
    for (const auto& row : rows) {
        const auto prefix = cloud.pts.topRows(row.n);
        const auto gt =
            static_cast<double>((prefix.rowwise().norm().array() > row.t).count());
        CHECK(doctest::Approx(row.survival).epsilon(1e-12) ==
              gt / static_cast<double>(row.n));
        const double depth = depth_exact_2d(prefix, row.t * x).value();
        CHECK(doctest::Approx(row.depth).epsilon(1e-12) == depth);
        if (row.survival > 0.0 && depth > 0.0) {
            CHECK_FALSE(row.flagged);
            CHECK(doctest::Approx(row.normalized).epsilon(1e-12) == depth / row.survival);
        } else {
            CHECK(row.flagged);
            CHECK(std::isnan(row.normalized));
        }
    }
}
