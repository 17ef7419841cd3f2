// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailhd/config.hpp"
#include "tailhd/types.hpp"

namespace tailhd {

// Threshold sequence gamma_n in (0,1), non-increasing over the working range.
struct GammaSequence {
    enum class Kind { Power, LogPower, Table };
    Kind kind = Kind::Power;
    double beta = 0.5;  // power: n^{-beta}, beta in (0,1)
    double p = 2.0;     // log-power: (log n)^p / n, p > 1
    std::vector<std::pair<std::int64_t, double>> table;  // custom, sorted by n

    double operator()(std::int64_t n) const;
    std::string to_string() const;
};

GammaSequence gamma_power(double beta);
GammaSequence gamma_log_power(double p);
GammaSequence gamma_table(std::vector<std::pair<std::int64_t, double>> rows);

// Radius map n -> t_n.
struct TMap {
    enum class Kind { Gaussian, Mrv, Linear, Affine };
    Kind kind = Kind::Linear;
    double beta = 0.5;   // gaussian: sqrt(2 beta log n); mrv: n^{beta/alpha}
    double alpha = 2.0;  // mrv
    double c = 1000.0;   // linear: n / c
    double a = 0.0;      // affine: a + b * n
    double b = 1.0;
    double cap = 0.0;    // 0 = uncapped; otherwise t_n = min(raw, cap)

    double operator()(std::int64_t n) const;
    std::string to_string() const;
};

TMap t_schedule_gaussian(double beta);
TMap t_schedule_mrv(double beta, double alpha);
TMap t_schedule_linear(double c);
TMap t_schedule_affine(double a, double b);

struct ScheduleRow {
    int k = 0;
    std::int64_t n = 0;
    double t = 0.0;
    double gamma = 0.0;
};

// Prefix schedule n_k = floor(kN/M) with the attached maps.
struct Schedule {
    std::int64_t N = 0;
    int M = 0;
    TMap t;
    std::optional<GammaSequence> gamma;
    std::vector<ScheduleRow> rows;

    static Schedule build(std::int64_t N, int M, const TMap& t,
                          const std::optional<GammaSequence>& gamma = std::nullopt);
    static Schedule from_config(const Config& cfg, const std::string& section = "schedule");
    void to_config(Config& cfg, const std::string& section = "schedule") const;
};

// Capacity function g_c(t) on (0,1), always within the generic 1/t bound.
struct CapacityEstimate {
    enum class Family { GaussianHalfspaces, MrvHalfspaces, Generic };
    Family family = Family::Generic;
    int dim = 2;
    double K = 1.0;  // unknown leading constant, default 1

    double operator()(double t) const;
    std::string to_string() const;
};

CapacityEstimate capacity_estimate(CapacityEstimate::Family family, int dim, double K = 1.0);

// Numeric surrogate for the o(.) growth conditions: both ratios must trend
// down and end below the tolerance on a log-spaced grid.
struct ConditionRow {
    std::int64_t n = 0;
    double gamma = 0.0;
    double r_a = 0.0;  // log(g_c(gamma_n)) / (n gamma_n)
    double r_b = 0.0;  // log log n / (n gamma_n)
};

struct ConditionReport {
    std::vector<ConditionRow> rows;
    bool c1a_pass = false;
    bool c1b_pass = false;
    double tolerance = 1e-3;
};

ConditionReport check_conditions(const GammaSequence& gamma, const CapacityEstimate& cap,
                                 std::int64_t n_min, std::int64_t n_max, int grid_points = 40,
                                 double tolerance = 1e-3);

}  // namespace tailhd
