// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tailhd {

// Counter-based generator: output i is mix(key + i*GAMMA), so streams can be
// split or skipped without touching shared state, and a (seed, stream) pair
// always yields the same sequence on every platform. Mixing constants are the
// widely used SplitMix64 finalizer.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))), counter_(0) {}

    /// Independent substream; child streams never collide with the parent.
    Rng split(std::uint64_t stream) const { return Rng(key_, stream + 1); }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * GAMMA); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe to pass through log().
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * std::numbers::pi * uniform();
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Exponential(rate), mean 1/rate.
    double exponential(double rate = 1.0) { return -std::log(uniform_pos()) / rate; }

    /// Standard Laplace (location 0, scale b) as a difference of exponentials.
    double laplace(double b = 1.0) { return b * (exponential() - exponential()); }

    /// Pareto on [1, inf) with survival t^-alpha.
    double pareto(double alpha) { return std::pow(uniform_pos(), -1.0 / alpha); }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = gaussian();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

    /// Student-t via the Gaussian / chi-square ratio.
    double student_t(double nu) { return gaussian() / std::sqrt(chi_square(nu) / nu); }

private:
    static constexpr std::uint64_t GAMMA = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace tailhd
