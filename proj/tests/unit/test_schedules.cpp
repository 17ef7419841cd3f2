// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include <cmath>

#include "doctest.h"
#include "tailhd/schedules.hpp"

using namespace tailhd;

TEST_CASE("gamma sequences evaluate their closed forms") {
    CHECK(doctest::Approx(gamma_power(0.5)(10000)).epsilon(1e-12) == 0.01);
    CHECK(doctest::Approx(gamma_log_power(2.0)(100)).epsilon(1e-12) == 0.21207592441913597);
    CHECK_THROWS_AS(gamma_power(0.5)(2), ConfigError);  // needs n >= 3
    CHECK_THROWS_AS(gamma_power(0.0), ConfigError);
    CHECK_THROWS_AS(gamma_power(1.0), ConfigError);
    CHECK_THROWS_AS(gamma_log_power(1.0), ConfigError);
}

TEST_CASE("gamma tables step on the largest tabulated n") {
    const GammaSequence g = gamma_table({{100, 0.1}, {10, 0.3}});  // sorted internally
    CHECK(g(10) == 0.3);
    CHECK(g(50) == 0.3);
    CHECK(g(100) == 0.1);
    CHECK(g(5000) == 0.1);
    CHECK_THROWS_AS(g(5), ConfigError);  // below the table range
    CHECK_THROWS_AS(gamma_table({}), ConfigError);
    CHECK_THROWS_AS(gamma_table({{10, 1.5}}), ConfigError);
}

TEST_CASE("t maps evaluate their closed forms and respect the cap") {
    CHECK(doctest::Approx(t_schedule_gaussian(0.5)(100)).epsilon(1e-12) == 2.145966026289347);
    CHECK(doctest::Approx(t_schedule_mrv(0.5, 2.0)(16)).epsilon(1e-12) == 2.0);
    CHECK(doctest::Approx(t_schedule_linear(1000.0)(5000)).epsilon(1e-12) == 5.0);
    CHECK(doctest::Approx(t_schedule_affine(1.8, 1e-4)(2000)).epsilon(1e-12) == 2.0);

    TMap capped = t_schedule_linear(1.0);
    capped.cap = 3.0;
    CHECK(capped(2) == 2.0);
    CHECK(capped(10) == 3.0);

    CHECK_THROWS_AS(t_schedule_gaussian(0.0), ConfigError);
    CHECK_THROWS_AS(t_schedule_mrv(0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(t_schedule_linear(0.0), ConfigError);
    CHECK_THROWS_AS(t_schedule_affine(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(t_schedule_linear(10.0)(0), ConfigError);
}

TEST_CASE("schedule rows are the floor prefix grid") {
    const Schedule s = Schedule::build(100, 10, t_schedule_linear(10.0), gamma_power(0.5));
    REQUIRE(s.rows.size() == 10);
    for (int k = 1; k <= 10; ++k) {
        const auto& row = s.rows[static_cast<std::size_t>(k - 1)];
        CHECK(row.k == k);
        CHECK(row.n == 10 * k);
        CHECK(doctest::Approx(row.t).epsilon(1e-12) == static_cast<double>(k));
        CHECK(doctest::Approx(row.gamma).epsilon(1e-12) ==
              1.0 / std::sqrt(static_cast<double>(10 * k)));
    }

    // Ragged division still covers N at the last checkpoint.
    const Schedule odd = Schedule::build(103, 7, t_schedule_linear(1.0));
    CHECK(odd.rows.back().n == 103);
    CHECK(odd.rows.front().n == 103 / 7);
    for (const auto& row : odd.rows) CHECK(row.gamma == 0.0);  // no gamma attached

    // Tiny prefixes keep n >= 1 and leave gamma unset below its domain.
    const Schedule tiny = Schedule::build(7, 7, t_schedule_linear(1.0), gamma_power(0.5));
    CHECK(tiny.rows.front().n == 1);
    CHECK(tiny.rows.front().gamma == 0.0);
    CHECK(tiny.rows.back().gamma > 0.0);

    CHECK_THROWS_AS(Schedule::build(5, 10, t_schedule_linear(1.0)), ConfigError);
    CHECK_THROWS_AS(Schedule::build(0, 1, t_schedule_linear(1.0)), ConfigError);
}

TEST_CASE("schedules round-trip through config") {
    const Config cfg = Config::parse_string(
        "[schedule]\n"
        "N = 20000\n"
        "M = 10\n"
        "t = gaussian\n"
        "beta = 0.5\n"
        "gamma = power\n"
        "gamma_beta = 0.4\n");
    const Schedule s = Schedule::from_config(cfg);
    CHECK(s.N == 20000);
    CHECK(s.M == 10);
    CHECK(s.t.kind == TMap::Kind::Gaussian);
    REQUIRE(s.gamma.has_value());
    CHECK(s.gamma->beta == 0.4);

    Config out;
    s.to_config(out);
    const Schedule back = Schedule::from_config(out);
    REQUIRE(back.rows.size() == s.rows.size());
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        CHECK(back.rows[i].n == s.rows[i].n);
        CHECK(back.rows[i].t == s.rows[i].t);
        CHECK(back.rows[i].gamma == s.rows[i].gamma);
    }

    CHECK_THROWS_AS(
        Schedule::from_config(Config::parse_string("[schedule]\nN = 10\nM = 2\nt = cubic\n")),
        ConfigError);
    // mrv requires an explicit tail index.
    CHECK_THROWS_AS(
        Schedule::from_config(Config::parse_string("[schedule]\nN = 10\nM = 2\nt = mrv\n")),
        ConfigError);

    const Schedule affine = Schedule::from_config(Config::parse_string(
        "[schedule]\nN = 100\nM = 4\nt = affine\nt_a = 1\nt_b = 0.01\nt_cap = 1.6\n"));
    CHECK(affine.rows.front().t == 1.25);
    CHECK(affine.rows.back().t == 1.6);  // capped
}

TEST_CASE("capacity estimates never exceed the generic bound") {
    const CapacityEstimate generic = capacity_estimate(CapacityEstimate::Family::Generic, 2);
    CHECK(doctest::Approx(generic(0.01)).epsilon(1e-12) == 100.0);
    CHECK_THROWS_AS(generic(0.0), ConfigError);
    CHECK_THROWS_AS(generic(1.0), ConfigError);

    const CapacityEstimate gauss =
        capacity_estimate(CapacityEstimate::Family::GaussianHalfspaces, 3);
    const double t = std::exp(-4.0);
    CHECK(doctest::Approx(gauss(t)).epsilon(1e-12) == 4.0);  // (log 1/t)^{(d-1)/2}
    CHECK(doctest::Approx(gauss(0.9)).epsilon(1e-12) == std::log(1.0 / 0.9));

    const CapacityEstimate mrv = capacity_estimate(CapacityEstimate::Family::MrvHalfspaces, 2, 2.0);
    CHECK(doctest::Approx(mrv(0.1)).epsilon(1e-12) == 2.0);
    CHECK(doctest::Approx(mrv(0.9)).epsilon(1e-12) == 1.0 / 0.9);  // generic bound binds

    CHECK_THROWS_AS(capacity_estimate(CapacityEstimate::Family::Generic, 0), ConfigError);
    CHECK_THROWS_AS(capacity_estimate(CapacityEstimate::Family::Generic, 2, 0.0), ConfigError);
}

TEST_CASE("growth conditions pass on a long range and fail on a short one") {
    const CapacityEstimate cap =
        capacity_estimate(CapacityEstimate::Family::GaussianHalfspaces, 2);
    const ConditionReport good = check_conditions(gamma_power(0.5), cap, 100, 100000000);
    CHECK(good.c1a_pass);
    CHECK(good.c1b_pass);
    REQUIRE_FALSE(good.rows.empty());
    // Ratios shrink by orders of magnitude across the grid.
    CHECK(good.rows.back().r_b < good.rows.front().r_b / 100.0);

    // Over two decades the normalizer n * gamma_n is still tiny, so the
    // log log n cost cannot be certified.
    const ConditionReport short_range = check_conditions(gamma_power(0.5), cap, 100, 10000);
    CHECK_FALSE(short_range.c1b_pass);

    // A gamma pinned at 1/(n log n) decays too fast: n gamma_n -> 0.
    const GammaSequence starving = gamma_table({{3, 1e-9}});
    const ConditionReport bad = check_conditions(starving, cap, 100, 1000000);
    CHECK_FALSE(bad.c1a_pass);
    CHECK_FALSE(bad.c1b_pass);

    CHECK_THROWS_AS(check_conditions(gamma_power(0.5), cap, 2, 100), ConfigError);
    CHECK_THROWS_AS(check_conditions(gamma_power(0.5), cap, 100, 1000, 1), ConfigError);
}
