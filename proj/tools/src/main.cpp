// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// tailhd command-line front end. Each subcommand reads one key=value config
// (file plus --set overrides), writes its artifacts under the output
// directory, and dumps the effective config next to them, so rerunning the
// dumped config reproduces every output byte for byte.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "tailhd/config.hpp"
#include "tailhd/csv.hpp"
#include "tailhd/depth.hpp"
#include "tailhd/diagnostics.hpp"
#include "tailhd/directions.hpp"
#include "tailhd/distributions.hpp"
#include "tailhd/schedules.hpp"
#include "tailhd/svg.hpp"
#include "tailhd/types.hpp"

namespace fs = std::filesystem;
using namespace tailhd;

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path,
                    "config file: key = value lines, [section] headers, # comments");
    cmd->add_option("--set", args.overrides, "override one config key (section.key=value)")
        ->type_size(1);
    args.seed_opt = cmd->add_option("--seed", args.seed, "RNG seed (overrides the config)");
    args.threads_opt = cmd->add_option("--threads", args.threads, "worker threads");
    args.out_opt = cmd->add_option("--out", args.out, "output directory");
}

struct RunContext {
    Config cfg;
    std::uint64_t seed = 1;
    int threads = 1;
    fs::path out;
};

// Resolves file < --set < dedicated flags, pins the resolved common keys back
// into the config, and dumps it to <out>/config.txt.
RunContext make_context(const CommonArgs& args) {
    RunContext ctx;
    if (!args.config_path.empty()) ctx.cfg = Config::parse_file(args.config_path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || trimmed(kv.substr(0, eq)).empty())
            throw ConfigError("--set expects key=value, got: " + kv);
        ctx.cfg.set(trimmed(kv.substr(0, eq)), trimmed(kv.substr(eq + 1)));
    }
    if (args.seed_opt->count() > 0) ctx.cfg.set_int("seed", static_cast<std::int64_t>(args.seed));
    if (args.threads_opt->count() > 0) ctx.cfg.set_int("threads", args.threads);
    if (args.out_opt->count() > 0) ctx.cfg.set("out", args.out);

    ctx.seed = static_cast<std::uint64_t>(ctx.cfg.get_int("seed", 1));
    ctx.threads = static_cast<int>(ctx.cfg.get_int("threads", 1));
    if (ctx.threads < 1) throw ConfigError("threads must be >= 1");
    ctx.out = ctx.cfg.get_string("out", "out");

    ctx.cfg.set_int("seed", static_cast<std::int64_t>(ctx.seed));
    ctx.cfg.set_int("threads", ctx.threads);
    ctx.cfg.set("out", ctx.out.string());
    fs::create_directories(ctx.out);
    ctx.cfg.save((ctx.out / "config.txt").string());
    return ctx;
}

DistributionSpec spec_from(const RunContext& ctx) {
    if (!ctx.cfg.has("distribution.family"))
        throw ConfigError("missing [distribution] block (distribution.family)");
    return DistributionSpec::from_config(ctx.cfg);
}

// data = <csv> takes a file; otherwise a [distribution] block plus n is sampled.
PointCloud load_input(const RunContext& ctx, DistributionSpec* spec_out = nullptr,
                      bool* sampled = nullptr) {
    const bool have_data = ctx.cfg.has("data");
    const bool have_dist = ctx.cfg.has("distribution.family");
    if (have_data && have_dist)
        throw ConfigError("give either data = <csv> or a [distribution] block, not both");
    if (have_data) {
        PointCloud cloud = read_point_cloud_csv(ctx.cfg.get_string("data"));
        cloud.validate();
        return cloud;
    }
    if (have_dist) {
        const DistributionSpec spec = spec_from(ctx);
        const std::int64_t n = ctx.cfg.get_int("n");
        if (n < 1) throw ConfigError("n must be >= 1");
        if (spec_out) *spec_out = spec;
        if (sampled) *sampled = true;
        return sample(spec, n, ctx.seed);
    }
    throw ConfigError("no input: set data = <csv path> or a [distribution] block");
}

// Without a [schedule] block the curve sweeps a linear map out to the farthest
// data point, over min(40, N) checkpoints.
Schedule resolve_schedule(const RunContext& ctx, const PointCloud& cloud) {
    Config cfg = ctx.cfg;
    if (!cfg.has("schedule.N")) cfg.set_int("schedule.N", cloud.n());
    const std::int64_t N = cfg.get_int("schedule.N");
    if (N > cloud.n())
        throw ConfigError("schedule N = " + std::to_string(N) + " exceeds the " +
                          std::to_string(cloud.n()) + " available rows");
    if (!cfg.has("schedule.M")) cfg.set_int("schedule.M", std::min<std::int64_t>(40, N));
    if (!cfg.has("schedule.t")) {
        const double max_norm = cloud.pts.rowwise().norm().maxCoeff();
        if (!(max_norm > 0.0))
            throw ConfigError("cannot derive a default schedule from all-zero data");
        cfg.set("schedule.t", "linear");
        cfg.set_double("schedule.c", static_cast<double>(N) / max_norm);
    }
    return Schedule::from_config(cfg);
}

// rays = signed-axes | axes | explicit rows "1,0;0,1". Rows are used as given
// (the curve parameter t multiplies them), so zero rows are rejected.
Matrix resolve_rays(const Config& cfg, Eigen::Index d) {
    const std::string desc = cfg.get_string("rays", "signed-axes");
    Matrix rays;
    if (desc == "signed-axes") {
        rays = canonical_directions(static_cast<int>(d), true).dirs;
    } else if (desc == "axes") {
        rays = canonical_directions(static_cast<int>(d), false).dirs;
    } else {
        const Eigen::MatrixXd m = parse_matrix_rows(desc);
        if (m.cols() != d)
            throw ConfigError("rays have " + std::to_string(m.cols()) + " columns, data has " +
                              std::to_string(d));
        rays = m;
    }
    for (Eigen::Index r = 0; r < rays.rows(); ++r)
        if (rays.row(r).norm() == 0.0) throw ConfigError("zero ray");
    return rays;
}

// directions = K overrides the default projection budget for d >= 3.
std::optional<DirectionSet> resolve_directions(const Config& cfg, Eigen::Index d) {
    const std::int64_t k = cfg.get_int("directions", 0);
    if (k == 0) return std::nullopt;
    if (k < 1) throw ConfigError("directions must be >= 1");
    return default_direction_set(static_cast<int>(d), kDefaultDirectionSeed,
                                 static_cast<int>(k));
}

CurveOptions curve_options(const RunContext& ctx, const std::optional<DirectionSet>& dirs) {
    CurveOptions opts;
    opts.dirs = dirs ? &*dirs : nullptr;
    opts.use_exact_2d = ctx.cfg.get_bool("exact", true);
    opts.threads = ctx.threads;
    return opts;
}

std::vector<std::string> coord_header(Eigen::Index d, const std::string& stem = "x") {
    std::vector<std::string> h;
    for (Eigen::Index j = 0; j < d; ++j) h.push_back(stem + std::to_string(j + 1));
    return h;
}

std::string ray_label(Eigen::Index idx, const Vector& dir) {
    std::string s = "ray " + std::to_string(idx + 1) + " (";
    for (Eigen::Index j = 0; j < dir.size(); ++j) {
        if (j) s += ",";
        s += format_double(dir(j));
    }
    return s + ")";
}

void write_chart(const fs::path& path, const std::vector<SvgSeries>& series,
                 SvgChartOptions opts) {
    write_text_file(path.string(), render_line_chart(series, opts));
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const RunContext& ctx) {
    const DistributionSpec spec = spec_from(ctx);
    const std::int64_t n = ctx.cfg.get_int("n");
    if (n < 1) throw ConfigError("n must be >= 1");
    const PointCloud cloud = sample(spec, n, ctx.seed);

    CsvTable table;
    table.header = coord_header(cloud.dim());
    table.rows.reserve(static_cast<std::size_t>(cloud.n()));
    for (Eigen::Index i = 0; i < cloud.n(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(cloud.dim()));
        for (Eigen::Index j = 0; j < cloud.dim(); ++j)
            row[static_cast<std::size_t>(j)] = cloud.pts(i, j);
        table.rows.push_back(std::move(row));
    }
    const fs::path out = ctx.out / "sample.csv";
    write_csv(out.string(), table);
    std::cout << spec.family_name() << ": " << cloud.n() << " x " << cloud.dim() << " -> "
              << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// depth

int cmd_depth(const RunContext& ctx) {
    const PointCloud cloud = load_input(ctx);
    const Eigen::Index d = cloud.dim();

    Matrix queries;
    if (ctx.cfg.has("queries")) {
        PointCloud q = read_point_cloud_csv(ctx.cfg.get_string("queries"));
        q.validate();
        if (q.dim() != d) throw ConfigError("query dimension mismatch");
        queries = q.pts;
    } else if (ctx.cfg.has("query")) {
        const Eigen::VectorXd v = parse_vector(ctx.cfg.get_string("query"));
        if (v.size() != d) throw ConfigError("query dimension mismatch");
        queries = v.transpose();
    } else {
        throw ConfigError("set query = <vector> or queries = <csv path>");
    }

    const std::string method = ctx.cfg.get_string("method", "auto");
    std::optional<DirectionSet> dirs = resolve_directions(ctx.cfg, d);
    if (!dirs && (method == "approx" || (method == "auto" && d > 2)))
        dirs = default_direction_set(static_cast<int>(d), kDefaultDirectionSeed);

    CsvTable table;
    table.header = coord_header(d);
    table.header.insert(table.header.end(), {"depth", "numerator", "n"});
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        const Vector x = queries.row(i).transpose();
        DepthValue dv;
        if (method == "auto") {
            dv = depth_dispatch(cloud.pts, x, dirs ? dirs->dirs : Matrix());
        } else if (method == "approx") {
            dv = depth_approx(cloud.pts, x, dirs->dirs);
        } else if (method == "exact") {
            dv = d <= 2 ? depth_dispatch(cloud.pts, x, Matrix())
                        : depth_exact_brute(cloud.pts, x);
        } else if (method == "brute") {
            dv = depth_exact_brute(cloud.pts, x);
        } else {
            throw ConfigError("method must be auto, exact, approx or brute");
        }
        std::vector<double> row;
        for (Eigen::Index j = 0; j < d; ++j) row.push_back(x(j));
        row.push_back(dv.value());
        row.push_back(static_cast<double>(dv.numerator));
        row.push_back(static_cast<double>(dv.n));
        table.rows.push_back(std::move(row));
    }
    const fs::path out = ctx.out / "depths.csv";
    write_csv(out.string(), table);
    std::cout << queries.rows() << " queries (" << method << ") -> " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// contour

int cmd_contour(const RunContext& ctx) {
    const PointCloud cloud = load_input(ctx);
    if (cloud.dim() != 2) throw ConfigError("contour requires 2-D data");

    std::vector<double> taus;
    for (const auto& tok : split_list(ctx.cfg.get_string("taus", "0.05,0.1,0.2,0.3,0.4"))) {
        try {
            taus.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("malformed tau: " + tok);
        }
    }
    if (taus.empty()) throw ConfigError("taus is empty");
    for (double tau : taus)
        if (!(tau > 0.0) || !(tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    const int resolution = static_cast<int>(ctx.cfg.get_int("resolution", 720));

    CsvTable table;
    table.header = {"tau", "vertex", "x", "y"};
    std::vector<ContourPolygon> polys;
    for (double tau : taus) {
        const ContourPolygon poly = depth_contour_2d(cloud.pts, tau, resolution);
        for (std::size_t j = 0; j < poly.vertices.size(); ++j)
            table.rows.push_back(
                {tau, static_cast<double>(j), poly.vertices[j].x(), poly.vertices[j].y()});
        std::cout << "tau " << format_double(tau) << ": "
                  << (poly.empty() ? "empty" : std::to_string(poly.vertices.size()) + " vertices")
                  << "\n";
        if (!poly.empty()) polys.push_back(poly);
    }
    write_csv((ctx.out / "contours.csv").string(), table);

    if (ctx.cfg.get_bool("svg", true)) {
        // Thin the scatter so huge samples keep the plot small.
        const Eigen::Index stride = std::max<Eigen::Index>(1, cloud.n() / 2000);
        std::vector<std::pair<double, double>> pts;
        for (Eigen::Index i = 0; i < cloud.n(); i += stride)
            pts.emplace_back(cloud.pts(i, 0), cloud.pts(i, 1));
        SvgChartOptions opts;
        opts.title = "depth contours";
        opts.x_label = "x1";
        opts.y_label = "x2";
        write_text_file((ctx.out / "contours.svg").string(),
                        render_contour_chart(pts, polys, opts));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// tailscan

int cmd_tailscan(const RunContext& ctx) {
    PointCloud cloud = load_input(ctx);
    const Eigen::Index d = cloud.dim();
    if (ctx.cfg.get_bool("center", true)) {
        const Eigen::RowVectorXd mu = cloud.pts.colwise().mean();
        cloud.pts.rowwise() -= mu;
    }

    const Matrix rays = resolve_rays(ctx.cfg, d);
    const Schedule schedule = resolve_schedule(ctx, cloud);
    const std::optional<DirectionSet> dirs = resolve_directions(ctx.cfg, d);
    const std::vector<HDCurve> curves = hd_curves(cloud, rays, schedule, curve_options(ctx, dirs));

    const ClassifierConfig ccfg = ClassifierConfig::from_config(ctx.cfg);
    std::vector<TailVerdict> verdicts;
    verdicts.reserve(curves.size());
    for (const auto& curve : curves) verdicts.push_back(classify_direction(curve, ccfg));
    const DatasetVerdict dataset = classify_dataset(verdicts);

    std::vector<SvgSeries> y_series, w_series;
    for (std::size_t r = 0; r < curves.size(); ++r) {
        write_csv((ctx.out / ("ray_" + std::to_string(r + 1) + ".csv")).string(),
                  curve_table(curves[r]));
        SvgSeries ys{ray_label(static_cast<Eigen::Index>(r), curves[r].direction), {}};
        SvgSeries ws = ys;
        for (const auto& row : curves[r].rows) {
            ys.points.emplace_back(row.t, row.y);
            ws.points.emplace_back(row.t, row.w);
        }
        y_series.push_back(std::move(ys));
        w_series.push_back(std::move(ws));
    }

    // Label codes follow TailLabel: 0 light-superexp, 1 light-exp,
    // 2 light-subexp, 3 heavy, 4 inconclusive.
    CsvTable vt;
    vt.header = {"ray", "label", "rate", "rate_se", "theta_ls", "usable_rows", "window"};
    for (const auto& h : coord_header(d, "dir")) vt.header.push_back(h);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t r = 0; r < verdicts.size(); ++r) {
        const TailVerdict& v = verdicts[r];
        std::vector<double> row = {static_cast<double>(r + 1),
                                   static_cast<double>(static_cast<int>(v.label)),
                                   v.rate_defined ? v.rate : nan,
                                   v.rate_defined ? v.rate_se : nan,
                                   v.theta_ls_defined ? v.theta_ls : nan,
                                   static_cast<double>(v.usable_rows),
                                   v.window};
        for (Eigen::Index j = 0; j < d; ++j) row.push_back(v.direction(j));
        vt.rows.push_back(std::move(row));
    }
    write_csv((ctx.out / "verdicts.csv").string(), vt);

    const std::string report = verdict_report(dataset);
    write_text_file((ctx.out / "report.txt").string(), report);
    std::cout << report;

    if (ctx.cfg.get_bool("svg", true)) {
        SvgChartOptions yopts;
        yopts.title = "y = log(1/depth) / t";
        yopts.x_label = "t";
        yopts.y_label = "y";
        write_chart(ctx.out / "y.svg", y_series, yopts);
        SvgChartOptions wopts;
        wopts.title = "w = log(1/depth) / log t";
        wopts.x_label = "t";
        wopts.y_label = "w";
        write_chart(ctx.out / "w.svg", w_series, wopts);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// convergence

int cmd_convergence(const RunContext& ctx) {
    const PointCloud cloud = load_input(ctx);
    const Eigen::Index d = cloud.dim();
    const Eigen::VectorXd x = parse_vector(ctx.cfg.get_string("x"));
    if (x.size() != d) throw ConfigError("x dimension mismatch");
    if (x.norm() == 0.0) throw ConfigError("x must be nonzero");

    const Schedule schedule = resolve_schedule(ctx, cloud);
    const std::string mode = ctx.cfg.get_string("mode", "both");
    if (mode != "fixed" && mode != "growing" && mode != "both")
        throw ConfigError("mode must be fixed, growing or both");
    const std::optional<DirectionSet> dirs = resolve_directions(ctx.cfg, d);
    const CurveOptions opts = curve_options(ctx, dirs);

    std::vector<SvgSeries> series;
    if (mode == "growing" || mode == "both") {
        const HDCurve curve = hd_curve(cloud, x, schedule, opts);
        write_csv((ctx.out / "growing.csv").string(), curve_table(curve));
        SvgSeries s{"growing sample", {}};
        for (const auto& row : curve.rows) s.points.emplace_back(row.t, row.depth.value());
        series.push_back(std::move(s));
    }
    if (mode == "fixed" || mode == "both") {
        // Same t grid, every depth taken in the full N-row sample.
        const Eigen::Index N = static_cast<Eigen::Index>(schedule.N);
        const auto block = cloud.pts.topRows(N);
        HDCurve curve;
        curve.direction = x;
        std::vector<DepthValue> depths(schedule.rows.size());
        const bool exact2d = d == 2 && opts.use_exact_2d;
        if (d <= 2 && (d == 1 || exact2d)) {
            for (std::size_t c = 0; c < schedule.rows.size(); ++c) {
                const Vector q = schedule.rows[c].t * x;
                depths[c] = depth_dispatch(block, q, Matrix());
            }
        } else {
            PointCloud prefix{block};
            DirectionSet local;
            const DirectionSet* use = opts.dirs;
            if (!use) {
                local = default_direction_set(static_cast<int>(d), kDefaultDirectionSeed);
                use = &local;
            }
            Matrix qs(static_cast<Eigen::Index>(schedule.rows.size()), d);
            for (std::size_t c = 0; c < schedule.rows.size(); ++c)
                qs.row(static_cast<Eigen::Index>(c)) = schedule.rows[c].t * x.transpose();
            depths = prefix_depths(prefix, *use, {schedule.N}, {qs}, ctx.threads)[0];
        }
        for (std::size_t c = 0; c < schedule.rows.size(); ++c) {
            CurveRow row;
            row.k = schedule.rows[c].k;
            row.n = schedule.N;
            row.t = schedule.rows[c].t;
            row.depth = depths[c];
            apply_transforms(row);
            curve.rows.push_back(row);
        }
        write_csv((ctx.out / "fixed.csv").string(), curve_table(curve));
        SvgSeries s{"fixed sample", {}};
        for (const auto& row : curve.rows) s.points.emplace_back(row.t, row.depth.value());
        series.push_back(std::move(s));
    }

    if (ctx.cfg.get_bool("svg", true)) {
        SvgChartOptions copts;
        copts.title = "depth along t * x";
        copts.x_label = "t";
        copts.y_label = "depth";
        copts.log_y = true;
        write_chart(ctx.out / "convergence.svg", series, copts);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ratio

int cmd_ratio(const RunContext& ctx) {
    if (ctx.cfg.has("data"))
        throw ConfigError("ratio compares against a population law; give a [distribution] block");
    const DistributionSpec spec = spec_from(ctx);
    const Schedule schedule = Schedule::from_config(ctx.cfg);

    const double eps = ctx.cfg.get_double("eps", 1.0);
    if (eps < 0.0) throw ConfigError("eps must be >= 0");
    const double spacing = ctx.cfg.get_double("grid_spacing", 0.25);
    if (!(spacing > 0.0)) throw ConfigError("grid_spacing must be > 0");

    RatioOptions ropts;
    ropts.min_population_depth = ctx.cfg.get_double("min_population_depth", 0.05);
    ropts.directions = static_cast<int>(ctx.cfg.get_int("directions", 256));
    ropts.threads = ctx.threads;

    std::vector<std::uint64_t> seeds;
    if (ctx.cfg.has("seeds")) {
        for (const auto& tok : split_list(ctx.cfg.get_string("seeds"))) {
            try {
                seeds.push_back(std::stoull(tok));
            } catch (const std::exception&) {
                throw ConfigError("malformed seed: " + tok);
            }
        }
        if (seeds.empty()) throw ConfigError("seeds is empty");
    } else {
        const std::int64_t count = ctx.cfg.get_int("seed_count", 1);
        if (count < 1) throw ConfigError("seed_count must be >= 1");
        for (std::int64_t i = 0; i < count; ++i) seeds.push_back(ctx.seed + static_cast<std::uint64_t>(i));
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::vector<SvgSeries> series;
    for (std::uint64_t s : seeds) {
        const RatioSeries rs = ratio_experiment(spec, eps, schedule, spacing, s, ropts);
        CsvTable table;
        table.header = {"k", "n", "t", "sup_ratio", "included", "excluded"};
        SvgSeries line{"seed " + std::to_string(s), {}};
        for (const auto& row : rs.rows) {
            table.rows.push_back({static_cast<double>(row.k), static_cast<double>(row.n), row.t,
                                  row.sup_ratio, static_cast<double>(row.included),
                                  static_cast<double>(row.excluded)});
            line.points.emplace_back(static_cast<double>(row.n), row.sup_ratio);
        }
        write_csv((ctx.out / ("ratio_seed_" + std::to_string(s) + ".csv")).string(), table);
        series.push_back(std::move(line));
        std::cout << "seed " << s << ": grid " << rs.grid.size() << ", final sup "
                  << format_double(rs.rows.empty() ? 0.0 : rs.rows.back().sup_ratio) << "\n";
    }

    if (ctx.cfg.get_bool("svg", true)) {
        SvgChartOptions copts;
        copts.title = "sup |empirical / population - 1|";
        copts.x_label = "n";
        copts.y_label = "sup ratio";
        write_chart(ctx.out / "ratio.svg", series, copts);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// qq

int cmd_qq(const RunContext& ctx) {
    const PointCloud cloud = load_input(ctx);
    const Eigen::Index d = cloud.dim();
    const Marginal ref = Marginal::parse(ctx.cfg.get_string("reference", "gaussian(0,1)"));

    std::vector<Eigen::Index> cols;
    if (ctx.cfg.has("columns")) {
        for (const auto& tok : split_list(ctx.cfg.get_string("columns"))) {
            std::int64_t j = 0;
            try {
                j = std::stoll(tok);
            } catch (const std::exception&) {
                throw ConfigError("malformed column index: " + tok);
            }
            if (j < 1 || j > d) throw ConfigError("column index out of range: " + tok);
            cols.push_back(static_cast<Eigen::Index>(j - 1));
        }
    } else {
        for (Eigen::Index j = 0; j < d; ++j) cols.push_back(j);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    std::vector<SvgSeries> series;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j : cols) {
        std::vector<double> vals(static_cast<std::size_t>(cloud.n()));
        for (Eigen::Index i = 0; i < cloud.n(); ++i)
            vals[static_cast<std::size_t>(i)] = cloud.pts(i, j);
        const std::vector<QQPoint> qq = qq_data(std::move(vals), ref);
        CsvTable table;
        table.header = {"p", "reference", "sample"};
        SvgSeries line{"x" + std::to_string(j + 1), {}};
        for (const auto& pt : qq) {
            table.rows.push_back({pt.p, pt.reference, pt.sample});
            line.points.emplace_back(pt.reference, pt.sample);
            lo = std::min({lo, pt.reference, pt.sample});
            hi = std::max({hi, pt.reference, pt.sample});
        }
        write_csv((ctx.out / ("qq_col" + std::to_string(j + 1) + ".csv")).string(), table);
        series.push_back(std::move(line));
    }

    if (ctx.cfg.get_bool("svg", true)) {
        if (lo < hi) {
            SvgSeries diag{"reference", {{lo, lo}, {hi, hi}}};
            series.push_back(std::move(diag));
        }
        SvgChartOptions copts;
        copts.title = "QQ vs " + ref.to_string();
        copts.x_label = "reference quantile";
        copts.y_label = "sample quantile";
        write_chart(ctx.out / "qq.svg", series, copts);
    }
    std::cout << cols.size() << " columns vs " << ref.to_string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"halfspace-depth tail diagnostics"};
    app.require_subcommand(1);

    CommonArgs a_simulate, a_depth, a_contour, a_tailscan, a_convergence, a_ratio, a_qq;
    int exit_code = 0;

    struct Entry {
        const char* name;
        const char* help;
        CommonArgs* args;
        int (*run)(const RunContext&);
    };
    const Entry entries[] = {
        {"simulate", "sample a distribution to CSV", &a_simulate, cmd_simulate},
        {"depth", "halfspace depth of query points", &a_depth, cmd_depth},
        {"contour", "2-D depth contours (CSV + SVG)", &a_contour, cmd_contour},
        {"tailscan", "depth decay curves along rays plus a tail verdict", &a_tailscan,
         cmd_tailscan},
        {"convergence", "depth along t * x for fixed and growing prefixes", &a_convergence,
         cmd_convergence},
        {"ratio", "empirical/population depth ratio over a ball grid", &a_ratio, cmd_ratio},
        {"qq", "marginal QQ data against a reference law", &a_qq, cmd_qq},
    };
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, *e.args);
        sub->callback([&exit_code, &e] { exit_code = e.run(make_context(*e.args)); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help exits 0; bad usage is a config error
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
