#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "maxkin/errors.hpp"

namespace maxkin {

// Seedable random stream with self-contained variate transforms.
// All draws are functions of the mt19937_64 output alone, so identical
// seeds give identical streams on every build of this code base (the
// std::*_distribution classes make no such promise).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * (~std::uint64_t{0} / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal, Marsaglia polar method with one cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Exponential with unit mean.
    double exponential() { return -std::log1p(-uniform01()); }

    // Gamma(shape, scale 1), Marsaglia-Tsang; shape < 1 via the boost trick.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw DomainError("Rng::gamma: shape must be > 0");
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

    // Student-t via its normal/chi-squared mixture.
    double student_t(double dof) {
        if (!(dof > 0.0)) throw DomainError("Rng::student_t: dof must be > 0");
        return normal() / std::sqrt(chi_squared(dof) / dof);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace maxkin
