// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Microbenchmarks for the depth kernels and the experiment engines:
//
//   bench_exact_2d          angular sweep across sample sizes
//   bench_brute             reference oracle at its size cap
//   bench_approx            directional bound, d = 3
//   bench_prefix_engine     one curve over M checkpoints vs repeated scans
//   bench_sample            sampler throughput per family
//   bench_contour           full contour at typical resolution
//
// Run: ./tailhd_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "tailhd/depth.hpp"
#include "tailhd/diagnostics.hpp"
#include "tailhd/directions.hpp"
#include "tailhd/distributions.hpp"
#include "tailhd/rng.hpp"
#include "tailhd/schedules.hpp"

namespace {

using namespace tailhd;

PointCloud gaussian_cloud(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.gaussian();
    return PointCloud(std::move(m));
}

void bench_exact_2d(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const PointCloud cloud = gaussian_cloud(n, 2, 1);
    Vector x(2);
    x << 0.3, -0.2;
    for (auto _ : state) benchmark::DoNotOptimize(depth_exact_2d(cloud.pts, x).numerator);
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(bench_exact_2d)->Range(256, 262144)->Complexity(benchmark::oNLogN);

void bench_brute(benchmark::State& state) {
    const auto d = static_cast<Eigen::Index>(state.range(0));
    const PointCloud cloud = gaussian_cloud(100, d, 2);
    const Vector x = Vector::Zero(d);
    for (auto _ : state) benchmark::DoNotOptimize(depth_exact_brute(cloud.pts, x).numerator);
}
BENCHMARK(bench_brute)->DenseRange(2, 4);

void bench_approx(benchmark::State& state) {
    const auto k = static_cast<int>(state.range(0));
    const PointCloud cloud = gaussian_cloud(100000, 3, 3);
    const DirectionSet dirs = default_direction_set(3, 1, k);
    const Vector x = Vector::Ones(3);
    for (auto _ : state) benchmark::DoNotOptimize(depth_approx(cloud.pts, x, dirs.dirs).numerator);
}
BENCHMARK(bench_approx)->Arg(64)->Arg(256)->Arg(1024);

// Whole decay curve through the prefix engine: one sort per direction total,
// not one scan per checkpoint.
void bench_prefix_engine(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    const PointCloud cloud = gaussian_cloud(n, 3, 4);
    const DirectionSet dirs = default_direction_set(3, 1, 256);
    const Schedule schedule =
        Schedule::build(n, 40, t_schedule_gaussian(0.5));
    Vector u(3);
    u << 1, 0, 0;
    CurveOptions opts;
    opts.dirs = &dirs;
    for (auto _ : state) {
        const HDCurve curve = hd_curve(cloud, u, schedule, opts);
        benchmark::DoNotOptimize(curve.rows.back().depth.numerator);
    }
}
BENCHMARK(bench_prefix_engine)->Arg(10000)->Arg(100000);

void bench_sample(benchmark::State& state) {
    DistributionSpec spec;
    spec.dim = 3;
    switch (state.range(0)) {
        case 0: spec.family = FamilyKind::Gaussian; break;
        case 1: spec.family = FamilyKind::RadialExponential; break;
        case 2: spec.family = FamilyKind::SphericalStudentT; break;
        default: spec.family = FamilyKind::ProductPareto; break;
    }
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sample(spec, 10000, seed++).pts.sum());
    state.SetLabel(spec.family_name());
}
BENCHMARK(bench_sample)->DenseRange(0, 3);

void bench_contour(benchmark::State& state) {
    const PointCloud cloud = gaussian_cloud(state.range(0), 2, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(depth_contour_2d(cloud.pts, 0.1, 720).vertices.size());
}
BENCHMARK(bench_contour)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
