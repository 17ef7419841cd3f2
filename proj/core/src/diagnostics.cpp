// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "tailhd/fit.hpp"
#include "tailhd/parallel.hpp"

namespace tailhd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Prefix counting structure over value ranks.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t i) {
        for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) ++tree_[j];
    }

    // Sum of the first `count` item slots.
    std::int64_t prefix(std::size_t count) const {
        std::int64_t s = 0;
        for (std::size_t j = count; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

private:
    std::vector<std::int64_t> tree_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Prefix depth engine

std::vector<std::vector<DepthValue>> prefix_depths(const PointCloud& cloud,
                                                   const DirectionSet& dirs,
                                                   const std::vector<std::int64_t>& checkpoints,
                                                   const std::vector<Matrix>& queries,
                                                   int threads) {
    cloud.validate();
    const Eigen::Index n = cloud.n();
    const Eigen::Index d = cloud.dim();
    if (dirs.dim() != d) throw ConfigError("direction set dimension mismatch");
    if (dirs.k() < 1) throw ConfigError("prefix_depths requires at least one direction");
    if (checkpoints.size() != queries.size())
        throw ConfigError("one query batch per checkpoint required");
    std::int64_t prev = 0;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (checkpoints[c] <= prev || checkpoints[c] > n)
            throw ConfigError("checkpoints must be strictly increasing within [1, n]");
        prev = checkpoints[c];
        if (queries[c].rows() > 0 && queries[c].cols() != d)
            throw ConfigError("query dimension mismatch");
    }

    const std::size_t C = checkpoints.size();
    std::vector<std::vector<std::int64_t>> best(C);
    for (std::size_t c = 0; c < C; ++c)
        best[c].assign(static_cast<std::size_t>(queries[c].rows()), checkpoints[c]);

    const auto scan_direction = [&](Eigen::Index k, std::vector<std::vector<std::int64_t>>& acc) {
        const Eigen::VectorXd u = dirs.dirs.row(k).transpose();
        // Same per-row inner products as depth_approx, so counts agree bitwise.
        const Eigen::VectorXd proj = cloud.pts * u;
        // One pair sort replaces per-row rank searches; ties get distinct
        // ranks in row order, which the value-range searches below absorb.
        std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            order[static_cast<std::size_t>(i)] = {proj[i], i};
        std::sort(order.begin(), order.end());
        std::vector<double> sorted(static_cast<std::size_t>(n));
        std::vector<std::size_t> rank_of_row(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted[i] = order[i].first;
            rank_of_row[static_cast<std::size_t>(order[i].second)] = i;
        }
        Fenwick fw(sorted.size());
        Eigen::Index inserted = 0;
        for (std::size_t c = 0; c < C; ++c) {
            while (inserted < checkpoints[c]) {
                fw.add(rank_of_row[static_cast<std::size_t>(inserted)]);
                ++inserted;
            }
            const Matrix& q = queries[c];
            for (Eigen::Index r = 0; r < q.rows(); ++r) {
                const double s = dirs.dirs.row(k).dot(q.row(r));
                const auto le_rank = static_cast<std::size_t>(
                    std::upper_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
                const auto lt_rank = static_cast<std::size_t>(
                    std::lower_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
                const std::int64_t le = fw.prefix(le_rank);
                const std::int64_t ge = checkpoints[c] - fw.prefix(lt_rank);
                auto& slot = acc[c][static_cast<std::size_t>(r)];
                slot = std::min(slot, std::min(le, ge));
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(dirs.k())));
    if (nthreads <= 1) {
        for (Eigen::Index k = 0; k < dirs.k(); ++k) scan_direction(k, best);
    } else {
        // Per-thread minima merged afterwards; min is order-independent.
        std::vector<std::vector<std::vector<std::int64_t>>> partial(
            static_cast<std::size_t>(nthreads), best);
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t]() {
                for (Eigen::Index k = t; k < dirs.k(); k += nthreads)
                    scan_direction(k, partial[static_cast<std::size_t>(t)]);
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& p : partial)
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t r = 0; r < best[c].size(); ++r)
                    best[c][r] = std::min(best[c][r], p[c][r]);
    }

    std::vector<std::vector<DepthValue>> out(C);
    for (std::size_t c = 0; c < C; ++c) {
        out[c].reserve(best[c].size());
        for (const std::int64_t num : best[c]) out[c].push_back(DepthValue{num, checkpoints[c]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curves

void apply_transforms(CurveRow& row) {
    row.out_of_hull = row.depth.numerator == 0;
    row.y_defined = row.depth.positive() && row.t > 0.0;
    row.y = row.y_defined ? std::log(1.0 / row.depth.value()) / row.t : kNaN;
    row.w_defined = row.depth.positive() && row.t > 1.0;
    row.w = row.w_defined ? std::log(1.0 / row.depth.value()) / std::log(row.t) : kNaN;
}

std::vector<HDCurve> hd_curves(const PointCloud& cloud, const Matrix& rays,
                               const Schedule& schedule, const CurveOptions& opts) {
    cloud.validate();
    const Eigen::Index d = cloud.dim();
    if (rays.rows() < 1) throw ConfigError("at least one ray required");
    if (rays.cols() != d) throw ConfigError("ray dimension mismatch");
    if (schedule.rows.empty()) throw ConfigError("empty schedule");
    if (schedule.rows.back().n > cloud.n())
        throw ConfigError("schedule extends past the sample size");

    const std::size_t R = static_cast<std::size_t>(rays.rows());
    const std::size_t C = schedule.rows.size();
    std::vector<HDCurve> curves(R);
    for (std::size_t r = 0; r < R; ++r) {
        curves[r].direction = rays.row(static_cast<Eigen::Index>(r)).transpose();
        curves[r].rows.resize(C);
        for (std::size_t c = 0; c < C; ++c) {
            curves[r].rows[c].k = schedule.rows[c].k;
            curves[r].rows[c].n = schedule.rows[c].n;
            curves[r].rows[c].t = schedule.rows[c].t;
        }
    }

    if (d == 2 && opts.use_exact_2d) {
        for (std::size_t r = 0; r < R; ++r) {
            HDCurve& curve = curves[r];
            parallel_for(C, opts.threads, [&](std::size_t c) {
                CurveRow& row = curve.rows[c];
                const Vector q = row.t * curve.direction;
                row.depth = depth_exact_2d(cloud.pts.topRows(row.n), q);
            });
        }
    } else {
        DirectionSet local;
        const DirectionSet* dirs = opts.dirs;
        if (d == 1) {
            local.dirs = Matrix::Ones(1, 1);
            dirs = &local;
        } else if (dirs == nullptr) {
            local = default_direction_set(static_cast<int>(d), kDefaultDirectionSeed);
            dirs = &local;
        }
        std::vector<std::int64_t> checkpoints(C);
        std::vector<Matrix> queries(C);
        for (std::size_t c = 0; c < C; ++c) {
            checkpoints[c] = schedule.rows[c].n;
            queries[c] = rays * schedule.rows[c].t;
        }
        const auto depths = prefix_depths(cloud, *dirs, checkpoints, queries, opts.threads);
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t r = 0; r < R; ++r) curves[r].rows[c].depth = depths[c][r];
    }

    for (auto& curve : curves)
        for (auto& row : curve.rows) apply_transforms(row);
    return curves;
}

HDCurve hd_curve(const PointCloud& cloud, const Vector& direction, const Schedule& schedule,
                 const CurveOptions& opts) {
    Matrix rays(1, direction.size());
    rays.row(0) = direction.transpose();
    return hd_curves(cloud, rays, schedule, opts)[0];
}

CsvTable curve_table(const HDCurve& curve) {
    CsvTable table;
    table.header = {"k", "n", "t", "depth", "y", "w", "flags"};
    table.rows.reserve(curve.rows.size());
    for (const CurveRow& row : curve.rows) {
        double flags = 0;
        if (row.out_of_hull) flags += 1;
        if (!row.y_defined) flags += 2;
        if (!row.w_defined) flags += 4;
        table.rows.push_back({static_cast<double>(row.k), static_cast<double>(row.n), row.t,
                              row.depth.value(), row.y, row.w, flags});
    }
    return table;
}

// ---------------------------------------------------------------------------
// Classifier

std::string to_string(TailLabel label) {
    switch (label) {
        case TailLabel::LightSuperExp: return "light-superexp";
        case TailLabel::LightExp: return "light-exp";
        case TailLabel::LightSubExp: return "light-subexp";
        case TailLabel::Heavy: return "heavy";
        case TailLabel::Inconclusive: return "inconclusive";
    }
    return "";
}

std::string to_string(OverallLabel label) {
    switch (label) {
        case OverallLabel::HeavyTailed: return "heavy-tailed";
        case OverallLabel::LightAlongSomeDirection: return "light-along-some-direction";
        case OverallLabel::Inconclusive: return "inconclusive";
    }
    return "";
}

ClassifierConfig ClassifierConfig::from_config(const Config& cfg, const std::string& section) {
    const std::string prefix = section.empty() ? "" : section + ".";
    ClassifierConfig c;
    c.y_window = cfg.get_double(prefix + "y_window", c.y_window);
    c.w_window = cfg.get_double(prefix + "w_window", c.w_window);
    c.rel_tol = cfg.get_double(prefix + "rel_tol", c.rel_tol);
    c.sig_mult = cfg.get_double(prefix + "sig_mult", c.sig_mult);
    c.eps_y = cfg.get_double(prefix + "eps_y", c.eps_y);
    c.eps_w = cfg.get_double(prefix + "eps_w", c.eps_w);
    c.rms_ratio = cfg.get_double(prefix + "rms_ratio", c.rms_ratio);
    c.se_frac = cfg.get_double(prefix + "se_frac", c.se_frac);
    c.min_rows = static_cast<int>(cfg.get_int(prefix + "min_rows", c.min_rows));
    c.w_min_rows = static_cast<int>(cfg.get_int(prefix + "w_min_rows", c.w_min_rows));
    c.w_t_min = cfg.get_double(prefix + "w_t_min", c.w_t_min);
    return c;
}

namespace {

struct UsableRow {
    double t = 0.0;
    double y = 0.0;
    double w = 0.0;
    double logd = 0.0;  // log(1/depth)
    bool has_w = false;
};

// Trailing `fraction` of rows, at least min(5, size).
template <typename T>
std::vector<T> trailing_window(const std::vector<T>& rows, double fraction) {
    const std::size_t size = rows.size();
    std::size_t m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(size)));
    m = std::clamp<std::size_t>(m, std::min<std::size_t>(5, size), size);
    return std::vector<T>(rows.end() - static_cast<std::ptrdiff_t>(m), rows.end());
}

std::string describe_pct(double rho) {
    const double pct = 100.0 * rho;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.0f%%", pct);
    return buf;
}

}  // namespace

TailVerdict classify_direction(const HDCurve& curve, const ClassifierConfig& cfg) {
    TailVerdict v;
    v.direction = curve.direction;

    std::vector<UsableRow> usable;
    for (const CurveRow& row : curve.rows) {
        if (!row.y_defined) continue;
        UsableRow u;
        u.t = row.t;
        u.y = row.y;
        u.logd = std::log(1.0 / row.depth.value());
        u.has_w = row.w_defined;
        u.w = row.w;
        usable.push_back(u);
    }
    v.usable_rows = static_cast<int>(usable.size());
    if (v.usable_rows < cfg.min_rows) {
        v.reason = "only " + std::to_string(v.usable_rows) + " usable rows (need " +
                   std::to_string(cfg.min_rows) + ")";
        return v;
    }

    // Stage 1: trend of y over the trailing window.
    const auto ywin = trailing_window(usable, cfg.y_window);
    std::vector<double> ts, ys, logds;
    for (const auto& u : ywin) {
        ts.push_back(u.t);
        ys.push_back(u.y);
        logds.push_back(u.logd);
    }
    const LineFit fy = fit_line(ts, ys);
    const double ybar = mean_of(ys);
    const double dy = fy.at(ts.back()) - fy.at(ts.front());
    const double rho_y = dy / std::max(std::abs(ybar), 1e-12);
    v.window = cfg.y_window;

    if (rho_y > cfg.rel_tol && fy.slope > cfg.sig_mult * fy.slope_se) {
        v.label = TailLabel::LightSuperExp;
        v.reason = "y rising " + describe_pct(rho_y) + " across the trailing window";
        return v;
    }
    const bool y_falling = rho_y < -cfg.rel_tol && fy.slope < -cfg.sig_mult * fy.slope_se;
    if (!y_falling && ybar > cfg.eps_y) {
        const LineFit fr = fit_line(ts, logds);
        if (fr.slope > 0.0) {
            v.label = TailLabel::LightExp;
            v.rate = fr.slope;
            v.rate_se = fr.slope_se;
            v.rate_defined = true;
            v.reason = "y flat (" + describe_pct(rho_y) + ") at level " + format_double(ybar);
            return v;
        }
    }

    // Stage 2: y decayed (or fell); discriminate sub-exponential vs polynomial
    // via w on rows safely above t = 1.
    std::vector<UsableRow> wrows;
    for (const auto& u : usable)
        if (u.has_w && u.t >= cfg.w_t_min) wrows.push_back(u);
    if (static_cast<int>(wrows.size()) < cfg.w_min_rows) {
        v.reason = "only " + std::to_string(wrows.size()) + " rows with t >= " +
                   format_double(cfg.w_t_min) + " (need " + std::to_string(cfg.w_min_rows) +
                   " for index estimation)";
        return v;
    }
    const auto wwin = trailing_window(wrows, cfg.w_window);
    v.window = cfg.w_window;
    std::vector<double> wt, wv, wlogd;
    for (const auto& u : wwin) {
        wt.push_back(u.t);
        wv.push_back(u.w);
        wlogd.push_back(u.logd);
    }
    const LineFit fw = fit_line(wt, wv);
    const double wbar = mean_of(wv);
    const double dw = fw.at(wt.back()) - fw.at(wt.front());
    const double rho_w = dw / std::max(std::abs(wbar), 1e-12);

    const auto m = static_cast<Eigen::Index>(wwin.size());
    Eigen::VectorXd b(m);
    Eigen::MatrixXd xh(m, 3), xp(m, 2), xs(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double t = wt[static_cast<std::size_t>(i)];
        const double lt = std::log(t);
        b(i) = wlogd[static_cast<std::size_t>(i)];
        xh(i, 0) = 1.0;
        xh(i, 1) = lt;
        xh(i, 2) = std::log(lt);
        xp(i, 0) = 1.0;
        xp(i, 1) = lt;
        xs(i, 0) = 1.0;
        xs(i, 1) = std::sqrt(t);
        xs(i, 2) = lt;
    }
    const MultiFit fh = fit_multi(xh, b);
    const MultiFit fp = fit_multi(xp, b);
    const MultiFit fs = fit_multi(xs, b);
    v.theta_ls = fp.coef(1);
    v.theta_ls_defined = true;

    const bool w_rising = rho_w > cfg.rel_tol && fw.slope > cfg.sig_mult * fw.slope_se;
    if (w_rising) {
        if (fs.rms < cfg.rms_ratio * fh.rms) {
            v.label = TailLabel::LightSubExp;
            v.reason = "w rising " + describe_pct(rho_w) +
                       "; sub-exponential template outfits the polynomial one";
            return v;
        }
        // A slowly vanishing log factor keeps w below its limit on any finite
        // window, so (log t)^delta t^-theta with a small index shows up here
        // as a rising w. Accept heavy only when the log-polynomial template
        // decisively outfits the sub-exponential one and pins the index.
        if (fh.rms < cfg.rms_ratio * fs.rms && fh.se(1) <= cfg.se_frac * std::abs(fh.coef(1)) &&
            fh.coef(1) > cfg.eps_w && wbar > cfg.eps_w) {
            v.label = TailLabel::Heavy;
            v.rate = fh.coef(1);
            v.rate_se = fh.se(1);
            v.rate_defined = true;
            v.reason = "w rising " + describe_pct(rho_w) + " toward " + format_double(fh.coef(1)) +
                       "; log-polynomial template outfits the sub-exponential one";
            return v;
        }
        v.reason = "w rising " + describe_pct(rho_w) + " but no decay template fits cleanly";
        return v;
    }
    if (rho_w < -cfg.rel_tol && fw.slope < -cfg.sig_mult * fw.slope_se) {
        v.reason = "w trending down " + describe_pct(rho_w) + "; no stable index";
        return v;
    }

    // w is flat: polynomial decay. The index estimate is the trailing mean of
    // w, which integrates the curve and shrugs off the finite-t transient
    // that biases least-squares slopes. The 3-term fit takes over only when
    // it is decisively sharper than the plain one (a noise-free log factor);
    // on noisy windows ln t and ln ln t are nearly collinear and the 3-term
    // coefficient is unstable.
    double wsd = 0.0;
    for (const double w : wv) wsd += (w - wbar) * (w - wbar);
    wsd = std::sqrt(wsd / static_cast<double>(wv.size()));
    double theta = wbar;
    double theta_se = wsd / std::sqrt(static_cast<double>(wv.size()));
    std::string which = "trailing-mean";
    if (fh.rms < cfg.rms_ratio * fp.rms && fh.se(1) <= cfg.se_frac * std::abs(fh.coef(1))) {
        theta = fh.coef(1);
        theta_se = fh.se(1);
        which = "3-term";
    }
    if (theta > cfg.eps_w && wbar > cfg.eps_w) {
        v.label = TailLabel::Heavy;
        v.rate = theta;
        v.rate_se = theta_se;
        v.rate_defined = true;
        v.reason = "w flat (" + describe_pct(rho_w) + ") at " + format_double(wbar) + "; " +
                   which + " index fit";
        return v;
    }
    v.reason = "w flat but no positive index (theta " + format_double(theta) + ")";
    return v;
}

DatasetVerdict classify_dataset(const std::vector<TailVerdict>& verdicts) {
    if (verdicts.empty()) throw ConfigError("classify_dataset requires at least one verdict");
    DatasetVerdict out;
    out.verdicts = verdicts;
    bool any_light = false, any_heavy = false, any_inconclusive = false;
    for (const auto& v : verdicts) {
        switch (v.label) {
            case TailLabel::LightSuperExp:
            case TailLabel::LightExp:
            case TailLabel::LightSubExp:
                any_light = true;
                break;
            case TailLabel::Heavy:
                any_heavy = true;
                break;
            case TailLabel::Inconclusive:
                any_inconclusive = true;
                break;
        }
    }
    if (any_light) {
        out.overall = OverallLabel::LightAlongSomeDirection;
    } else if (any_heavy) {
        out.overall = OverallLabel::HeavyTailed;
        out.coverage_warning = any_inconclusive;
    } else {
        out.overall = OverallLabel::Inconclusive;
    }
    return out;
}

std::string verdict_report(const DatasetVerdict& verdict) {
    std::string out = "overall: " + to_string(verdict.overall);
    if (verdict.coverage_warning) out += " (coverage warning: some directions inconclusive)";
    out += "\n";
    for (const auto& v : verdict.verdicts) {
        out += "direction [";
        for (Eigen::Index i = 0; i < v.direction.size(); ++i) {
            if (i) out += " ";
            out += format_double(v.direction(i));
        }
        out += "]: " + to_string(v.label);
        if (v.rate_defined) {
            out += (v.label == TailLabel::Heavy ? "  index " : "  rate ") + format_double(v.rate) +
                   " +- " + format_double(v.rate_se);
        }
        out += "  (" + v.reason + ")\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Marginal upper bound

double marginal_upper_bound(const PointCloud& cloud, const Matrix& basis, const Vector& x,
                            double t) {
    cloud.validate();
    const Eigen::Index d = cloud.dim();
    if (basis.rows() != d || basis.cols() != d)
        throw ConfigError("basis must hold d directions of dimension d");
    const Eigen::MatrixXd gram = basis * basis.transpose();
    if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw ConfigError("basis is not orthonormal");
    const Vector q = t * x;
    return depth_approx(cloud.pts, q, basis).value();
}

// ---------------------------------------------------------------------------
// Sandwich check

SandwichReport sandwich_check(const PointCloud& cloud, const DistributionSpec& spec,
                              const Vector& x, const Schedule& schedule,
                              const CurveOptions& opts) {
    SandwichReport rep;
    rep.g = tail_lower_bound(spec);
    const double xnorm = x.norm();
    if (xnorm == 0.0) throw ConfigError("sandwich_check requires a non-zero ray");

    const HDCurve curve = hd_curve(cloud, x, schedule, opts);
    const std::size_t total = curve.rows.size();
    const std::size_t fit_count = (total + 1) / 2;

    rep.rows.reserve(total);
    std::vector<double> lambdas;
    std::vector<double> sigmas;
    for (std::size_t i = 0; i < total; ++i) {
        const CurveRow& cr = curve.rows[i];
        SandwichRow row;
        row.k = cr.k;
        row.n = cr.n;
        row.t = cr.t;
        row.depth = cr.depth.value();
        row.ref = rep.g(cr.t * xnorm);
        row.fit_half = i < fit_count;
        if (row.fit_half) {
            if (!cr.depth.positive())
                throw DataError("insufficient range: depth reached 0 inside the fitting half");
            lambdas.push_back(std::log(row.depth) - std::log(row.ref));
            // Binomial noise floor of log-depth, 1/sqrt(count).
            sigmas.push_back(1.0 / std::sqrt(static_cast<double>(cr.depth.numerator)));
        }
        rep.rows.push_back(row);
    }
    rep.fit_rows = static_cast<int>(fit_count);
    rep.validate_rows = static_cast<int>(total - fit_count);

    const double lam_mean = mean_of(lambdas);
    double var = 0.0;
    for (const double l : lambdas) var += (l - lam_mean) * (l - lam_mean);
    const double lam_sd = std::sqrt(var / static_cast<double>(lambdas.size()));
    const double sigma = std::max(lam_sd, *std::max_element(sigmas.begin(), sigmas.end()));
    rep.c = std::exp(lam_mean - 3.0 * sigma);
    rep.C = std::exp(lam_mean + 3.0 * sigma);

    int inside = 0;
    for (std::size_t i = 0; i < total; ++i) {
        SandwichRow& row = rep.rows[i];
        row.inside = row.depth > 0.0 && row.depth >= rep.c * row.ref && row.depth <= rep.C * row.ref;
        if (!row.fit_half) {
            if (row.inside)
                ++inside;
            else
                ++rep.violations;
        }
    }
    rep.fraction_inside =
        rep.validate_rows == 0 ? 1.0 : static_cast<double>(inside) / rep.validate_rows;
    return rep;
}

// ---------------------------------------------------------------------------
// Ratio experiment

namespace {

std::vector<Vector> ball_grid(int d, double eps, double spacing) {
    std::vector<Vector> grid;
    if (eps == 0.0) {
        grid.push_back(Vector::Zero(d));
        return grid;
    }
    const auto m = static_cast<long>(std::floor(eps / spacing + 1e-9));
    std::vector<long> idx(static_cast<std::size_t>(d), -m);
    while (true) {
        Vector x(d);
        for (int j = 0; j < d; ++j) x(j) = static_cast<double>(idx[static_cast<std::size_t>(j)]) * spacing;
        if (x.norm() <= eps + 1e-12) grid.push_back(x);
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[static_cast<std::size_t>(j)] <= m) break;
            idx[static_cast<std::size_t>(j)] = -m;
        }
        if (j == d) break;
    }
    return grid;
}

}  // namespace

RatioSeries ratio_experiment(const DistributionSpec& spec, double eps, const Schedule& schedule,
                             double grid_spacing, std::uint64_t seed, const RatioOptions& opts) {
    if (!has_closed_form_depth(spec))
        throw ConfigError("ratio experiment needs a closed-form population oracle (family " +
                          spec.family_name() + " has none)");
    if (eps < 0.0) throw ConfigError("eps must be >= 0");
    if (grid_spacing <= 0.0) throw ConfigError("grid spacing must be > 0");

    RatioSeries series;
    series.seed = seed;
    series.grid = ball_grid(spec.dim, eps, grid_spacing);

    const PointCloud cloud = sample(spec, schedule.N, seed);
    DirectionSet dirs;
    if (spec.dim == 2)
        dirs = grid_directions_2d(opts.directions);
    else
        dirs = default_direction_set(spec.dim, kDefaultDirectionSeed, opts.directions);

    const std::size_t C = schedule.rows.size();
    std::vector<std::int64_t> checkpoints(C);
    std::vector<Matrix> queries(C);
    // population value per included query, aligned with the query rows
    std::vector<std::vector<double>> pops(C);
    std::vector<int> excluded(C, 0);
    for (std::size_t c = 0; c < C; ++c) {
        const ScheduleRow& srow = schedule.rows[c];
        checkpoints[c] = srow.n;
        std::vector<Vector> included;
        for (const Vector& g : series.grid) {
            const Vector q = srow.t * g;
            const double pop = population_depth(spec, q).value;
            if (pop >= opts.min_population_depth) {
                included.push_back(q);
                pops[c].push_back(pop);
            } else {
                ++excluded[c];
            }
        }
        Matrix qm(static_cast<Eigen::Index>(included.size()), spec.dim);
        for (std::size_t r = 0; r < included.size(); ++r)
            qm.row(static_cast<Eigen::Index>(r)) = included[r].transpose();
        queries[c] = std::move(qm);
    }

    const auto depths = prefix_depths(cloud, dirs, checkpoints, queries, opts.threads);

    series.rows.reserve(C);
    for (std::size_t c = 0; c < C; ++c) {
        RatioRow row;
        row.k = schedule.rows[c].k;
        row.n = schedule.rows[c].n;
        row.t = schedule.rows[c].t;
        row.included = static_cast<int>(pops[c].size());
        row.excluded = excluded[c];
        if (row.included == 0) {
            row.sup_ratio = kNaN;
        } else {
            double sup = 0.0;
            for (std::size_t r = 0; r < pops[c].size(); ++r)
                sup = std::max(sup, std::abs(depths[c][r].value() / pops[c][r] - 1.0));
            row.sup_ratio = sup;
        }
        series.rows.push_back(row);
    }
    return series;
}

// ---------------------------------------------------------------------------
// Symmetry probe

std::vector<SymmetryRow> symmetry_probe(const PointCloud& cloud, const Eigen::MatrixXd& sigma,
                                        const std::vector<double>& t_grid,
                                        const std::vector<std::pair<Vector, Vector>>& pairs,
                                        const CurveOptions& opts) {
    cloud.validate();
    const Eigen::Index d = cloud.dim();
    if (sigma.rows() != d || sigma.cols() != d) throw ConfigError("sigma must be d x d");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw ConfigError("sigma must be positive definite");
    if (pairs.empty()) throw ConfigError("at least one direction pair required");
    for (const auto& [a, b] : pairs) {
        if (a.size() != d || b.size() != d) throw ConfigError("pair dimension mismatch");
        if (std::abs((sigma * a).norm() - (sigma * b).norm()) > 1e-8)
            throw ConfigError("pair does not satisfy |sigma x| = |sigma y|");
    }

    DirectionSet local;
    const DirectionSet* dirs = opts.dirs;
    if (d > 2 && dirs == nullptr) {
        local = default_direction_set(static_cast<int>(d), kDefaultDirectionSeed);
        dirs = &local;
    }
    const Matrix empty(0, d);

    std::vector<SymmetryRow> out;
    out.reserve(t_grid.size());
    for (const double t : t_grid) {
        SymmetryRow row;
        row.t = t;
        for (const auto& [a, b] : pairs) {
            const DepthValue da = depth_dispatch(cloud.pts, t * a, dirs ? dirs->dirs : empty);
            const DepthValue db = depth_dispatch(cloud.pts, t * b, dirs ? dirs->dirs : empty);
            if (!da.positive() || !db.positive()) {
                ++row.pairs_dropped;
                continue;
            }
            ++row.pairs_used;
            row.max_deviation = std::max(row.max_deviation, std::abs(da.value() / db.value() - 1.0));
        }
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// QQ data

std::vector<QQPoint> qq_data(std::vector<double> sample, const Marginal& reference) {
    if (sample.size() < 2) throw ConfigError("qq_data requires at least 2 sample values");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    std::vector<QQPoint> out;
    out.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        QQPoint p;
        p.p = (static_cast<double>(i) + 0.5) / n;
        p.reference = reference.quantile(p.p);
        p.sample = sample[i];
        out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MRV-normalized curve

std::vector<MrvRow> mrv_normalized_curve(const PointCloud& cloud, const Vector& x,
                                         const Schedule& schedule, const CurveOptions& opts) {
    const HDCurve curve = hd_curve(cloud, x, schedule, opts);

    // Prefix counts of |X_i| > t via one pass over sorted norms.
    const Eigen::Index n = cloud.n();
    std::vector<double> norms(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) norms[static_cast<std::size_t>(i)] = cloud.pts.row(i).norm();
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Fenwick fw(sorted.size());
    Eigen::Index inserted = 0;

    std::vector<MrvRow> out;
    out.reserve(curve.rows.size());
    for (const CurveRow& cr : curve.rows) {
        while (inserted < cr.n) {
            const auto rank = static_cast<std::size_t>(
                std::lower_bound(sorted.begin(), sorted.end(), norms[static_cast<std::size_t>(inserted)]) -
                sorted.begin());
            fw.add(rank);
            ++inserted;
        }
        const auto le_rank = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), cr.t) - sorted.begin());
        const std::int64_t gt = cr.n - fw.prefix(le_rank);
        MrvRow row;
        row.k = cr.k;
        row.n = cr.n;
        row.t = cr.t;
        row.depth = cr.depth.value();
        row.survival = static_cast<double>(gt) / static_cast<double>(cr.n);
        if (gt > 0 && cr.depth.positive()) {
            row.normalized = row.depth / row.survival;
        } else {
            row.normalized = kNaN;
            row.flagged = true;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace tailhd
