// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "tailhd/csv.hpp"

namespace tailhd {

// ---------------------------------------------------------------------------
// GammaSequence

double GammaSequence::operator()(std::int64_t n) const {
    if (n < 3) throw ConfigError("gamma sequence requires n >= 3");
    const double nd = static_cast<double>(n);
    switch (kind) {
        case Kind::Power:
            return std::pow(nd, -beta);
        case Kind::LogPower:
            return std::pow(std::log(nd), p) / nd;
        case Kind::Table: {
            // Step interpolation: value of the largest tabulated n' <= n.
            auto it = std::upper_bound(table.begin(), table.end(), n,
                                       [](std::int64_t v, const auto& row) { return v < row.first; });
            if (it == table.begin()) throw ConfigError("n below gamma table range");
            return std::prev(it)->second;
        }
    }
    return 0.0;
}

std::string GammaSequence::to_string() const {
    switch (kind) {
        case Kind::Power:
            return "power(beta=" + format_double(beta) + ")";
        case Kind::LogPower:
            return "log-power(p=" + format_double(p) + ")";
        case Kind::Table:
            return "table(" + std::to_string(table.size()) + " rows)";
    }
    return "";
}

GammaSequence gamma_power(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("power gamma requires beta in (0,1)");
    GammaSequence g;
    g.kind = GammaSequence::Kind::Power;
    g.beta = beta;
    return g;
}

GammaSequence gamma_log_power(double p) {
    if (!(p > 1.0)) throw ConfigError("log-power gamma requires p > 1");
    GammaSequence g;
    g.kind = GammaSequence::Kind::LogPower;
    g.p = p;
    return g;
}

GammaSequence gamma_table(std::vector<std::pair<std::int64_t, double>> rows) {
    if (rows.empty()) throw ConfigError("gamma table must be nonempty");
    std::sort(rows.begin(), rows.end());
    for (const auto& [n, v] : rows)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("gamma table values must lie in (0,1)");
    GammaSequence g;
    g.kind = GammaSequence::Kind::Table;
    g.table = std::move(rows);
    return g;
}

// ---------------------------------------------------------------------------
// TMap

double TMap::operator()(std::int64_t n) const {
    if (n < 1) throw ConfigError("t map requires n >= 1");
    const double nd = static_cast<double>(n);
    double t = 0.0;
    switch (kind) {
        case Kind::Gaussian:
            t = std::sqrt(2.0 * beta * std::log(std::max(nd, 1.0)));
            break;
        case Kind::Mrv:
            t = std::pow(nd, beta / alpha);
            break;
        case Kind::Linear:
            t = nd / c;
            break;
        case Kind::Affine:
            t = a + b * nd;
            break;
    }
    if (cap > 0.0) t = std::min(t, cap);
    return t;
}

std::string TMap::to_string() const {
    std::string s;
    switch (kind) {
        case Kind::Gaussian:
            s = "gaussian(beta=" + format_double(beta) + ")";
            break;
        case Kind::Mrv:
            s = "mrv(beta=" + format_double(beta) + ",alpha=" + format_double(alpha) + ")";
            break;
        case Kind::Linear:
            s = "linear(c=" + format_double(c) + ")";
            break;
        case Kind::Affine:
            s = "affine(a=" + format_double(a) + ",b=" + format_double(b) + ")";
            break;
    }
    if (cap > 0.0) s += " cap=" + format_double(cap);
    return s;
}

TMap t_schedule_gaussian(double beta) {
    if (!(beta > 0.0)) throw ConfigError("gaussian t map requires beta > 0");
    TMap t;
    t.kind = TMap::Kind::Gaussian;
    t.beta = beta;
    return t;
}

TMap t_schedule_mrv(double beta, double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("mrv t map requires alpha > 0");
    if (!(beta > 0.0)) throw ConfigError("mrv t map requires beta > 0");
    TMap t;
    t.kind = TMap::Kind::Mrv;
    t.beta = beta;
    t.alpha = alpha;
    return t;
}

TMap t_schedule_linear(double c) {
    if (!(c > 0.0)) throw ConfigError("linear t map requires c > 0");
    TMap t;
    t.kind = TMap::Kind::Linear;
    t.c = c;
    return t;
}

TMap t_schedule_affine(double a, double b) {
    if (!(b > 0.0)) throw ConfigError("affine t map requires slope b > 0");
    TMap t;
    t.kind = TMap::Kind::Affine;
    t.a = a;
    t.b = b;
    return t;
}

// ---------------------------------------------------------------------------
// Schedule

Schedule Schedule::build(std::int64_t N, int M, const TMap& t,
                         const std::optional<GammaSequence>& gamma) {
    if (N < 1) throw ConfigError("schedule requires N >= 1");
    if (M < 1 || static_cast<std::int64_t>(M) > N) throw ConfigError("schedule requires 1 <= M <= N");
    Schedule s;
    s.N = N;
    s.M = M;
    s.t = t;
    s.gamma = gamma;
    s.rows.reserve(static_cast<std::size_t>(M));
    for (int k = 1; k <= M; ++k) {
        ScheduleRow row;
        row.k = k;
        row.n = (static_cast<std::int64_t>(k) * N) / M;
        if (row.n < 1) continue;
        row.t = t(row.n);
        row.gamma = (gamma && row.n >= 3) ? (*gamma)(row.n) : 0.0;
        s.rows.push_back(row);
    }
    if (s.rows.empty()) throw ConfigError("schedule produced no usable rows");
    return s;
}

Schedule Schedule::from_config(const Config& cfg, const std::string& section) {
    const std::string prefix = section.empty() ? "" : section + ".";
    const std::int64_t N = cfg.get_int(prefix + "N");
    const int M = static_cast<int>(cfg.get_int(prefix + "M"));
    const std::string kind = cfg.get_string(prefix + "t", "linear");
    TMap t;
    if (kind == "gaussian") {
        t = t_schedule_gaussian(cfg.get_double(prefix + "beta", 0.5));
    } else if (kind == "mrv") {
        t = t_schedule_mrv(cfg.get_double(prefix + "beta", 0.5), cfg.get_double(prefix + "alpha"));
    } else if (kind == "linear") {
        t = t_schedule_linear(cfg.get_double(prefix + "c", 1000.0));
    } else if (kind == "affine") {
        t = t_schedule_affine(cfg.get_double(prefix + "t_a", 0.0), cfg.get_double(prefix + "t_b"));
    } else {
        throw ConfigError("unknown t map kind: " + kind);
    }
    t.cap = cfg.get_double(prefix + "t_cap", 0.0);
    std::optional<GammaSequence> gamma;
    if (cfg.has(prefix + "gamma")) {
        const std::string gkind = cfg.get_string(prefix + "gamma");
        if (gkind == "power")
            gamma = gamma_power(cfg.get_double(prefix + "gamma_beta", 0.5));
        else if (gkind == "log-power")
            gamma = gamma_log_power(cfg.get_double(prefix + "gamma_p", 2.0));
        else
            throw ConfigError("unknown gamma kind: " + gkind);
    }
    return build(N, M, t, gamma);
}

void Schedule::to_config(Config& cfg, const std::string& section) const {
    const std::string prefix = section.empty() ? "" : section + ".";
    cfg.set_int(prefix + "N", N);
    cfg.set_int(prefix + "M", M);
    switch (t.kind) {
        case TMap::Kind::Gaussian:
            cfg.set(prefix + "t", "gaussian");
            cfg.set_double(prefix + "beta", t.beta);
            break;
        case TMap::Kind::Mrv:
            cfg.set(prefix + "t", "mrv");
            cfg.set_double(prefix + "beta", t.beta);
            cfg.set_double(prefix + "alpha", t.alpha);
            break;
        case TMap::Kind::Linear:
            cfg.set(prefix + "t", "linear");
            cfg.set_double(prefix + "c", t.c);
            break;
        case TMap::Kind::Affine:
            cfg.set(prefix + "t", "affine");
            cfg.set_double(prefix + "t_a", t.a);
            cfg.set_double(prefix + "t_b", t.b);
            break;
    }
    if (t.cap > 0.0) cfg.set_double(prefix + "t_cap", t.cap);
    if (gamma) {
        switch (gamma->kind) {
            case GammaSequence::Kind::Power:
                cfg.set(prefix + "gamma", "power");
                cfg.set_double(prefix + "gamma_beta", gamma->beta);
                break;
            case GammaSequence::Kind::LogPower:
                cfg.set(prefix + "gamma", "log-power");
                cfg.set_double(prefix + "gamma_p", gamma->p);
                break;
            case GammaSequence::Kind::Table:
                throw ConfigError("table gamma sequences do not serialize");
        }
    }
}

// ---------------------------------------------------------------------------
// Capacity

double CapacityEstimate::operator()(double t) const {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("capacity defined on t in (0,1)");
    double g = 0.0;
    switch (family) {
        case Family::GaussianHalfspaces:
            g = K * std::pow(std::log(1.0 / t), 0.5 * (dim - 1));
            break;
        case Family::MrvHalfspaces:
            g = K;
            break;
        case Family::Generic:
            g = 1.0 / t;
            break;
    }
    // The generic bound dominates every admissible capacity.
    return std::min(g, 1.0 / t);
}

std::string CapacityEstimate::to_string() const {
    switch (family) {
        case Family::GaussianHalfspaces:
            return "gaussian-halfspaces(d=" + std::to_string(dim) + ",K=" + format_double(K) + ")";
        case Family::MrvHalfspaces:
            return "mrv-halfspaces(K=" + format_double(K) + ")";
        case Family::Generic:
            return "generic";
    }
    return "";
}

CapacityEstimate capacity_estimate(CapacityEstimate::Family family, int dim, double K) {
    if (dim < 1) throw ConfigError("capacity requires d >= 1");
    if (!(K > 0.0)) throw ConfigError("capacity constant must be > 0");
    CapacityEstimate c;
    c.family = family;
    c.dim = dim;
    c.K = K;
    return c;
}

// ---------------------------------------------------------------------------
// Condition checks

ConditionReport check_conditions(const GammaSequence& gamma, const CapacityEstimate& cap,
                                 std::int64_t n_min, std::int64_t n_max, int grid_points,
                                 double tolerance) {
    if (n_min < 3 || n_max <= n_min) throw ConfigError("condition check needs 3 <= n_min < n_max");
    if (grid_points < 2) throw ConfigError("condition check needs >= 2 grid points");
    ConditionReport rep;
    rep.tolerance = tolerance;
    const double lo = std::log(static_cast<double>(n_min));
    const double hi = std::log(static_cast<double>(n_max));
    std::int64_t prev_n = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double f = static_cast<double>(i) / (grid_points - 1);
        auto n = static_cast<std::int64_t>(std::llround(std::exp(lo + f * (hi - lo))));
        n = std::clamp(n, n_min, n_max);
        if (n == prev_n) continue;
        prev_n = n;
        ConditionRow row;
        row.n = n;
        row.gamma = gamma(n);
        if (!(row.gamma > 0.0 && row.gamma < 1.0))
            throw ConfigError("gamma out of (0,1) at n=" + std::to_string(n));
        const double ngamma = static_cast<double>(n) * row.gamma;
        // g_c can dip below 1 (e.g. Gaussian near t=1); clamp the log at 0 so
        // a "negative capacity cost" never certifies the condition.
        row.r_a = std::max(std::log(cap(row.gamma)), 0.0) / ngamma;
        row.r_b = std::log(std::log(static_cast<double>(n))) / ngamma;
        rep.rows.push_back(row);
    }
    const auto trend_pass = [&](auto pick) {
        const double last = pick(rep.rows.back());
        if (!(last <= tolerance)) return false;
        // Demand an overall downward trend: last <= first and no blow-up mid-range.
        const double first = pick(rep.rows.front());
        double worst = last;
        for (const auto& r : rep.rows) worst = std::max(worst, pick(r));
        return last <= first + 1e-12 && worst <= std::max(first, tolerance) * 10.0 + 1e-12;
    };
    rep.c1a_pass = trend_pass([](const ConditionRow& r) { return r.r_a; });
    rep.c1b_pass = trend_pass([](const ConditionRow& r) { return r.r_b; });
    return rep;
}

}  // namespace tailhd
