// Shared test-side oracles, kept independent of the library code paths they
// check: a quadrature-based CDF for Kolmogorov-Smirnov tests, a dense
// delta-grid minimum of the tail functions, and small statistics helpers.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "maxkin/analysis.hpp"
#include "maxkin/equilibria.hpp"
#include "maxkin/quadrature.hpp"

namespace testsupport {

// CDF built by accumulating per-interval quadrature of the density in a
// tail-compactifying coordinate (u = atan v on R, u = v/(1+v) on R+).
class QuadratureCdf {
public:
    explicit QuadratureCdf(const maxkin::equilibria::EquilibriumSpec& spec,
                           int intervals = 4096)
        : spec_(spec), half_line_(spec.half_line()), cum_(intervals + 1), u_(intervals + 1) {
        const double u_lo = half_line_ ? 0.0 : -std::asin(1.0);
        const double u_hi = half_line_ ? 1.0 : std::asin(1.0);
        for (int i = 0; i <= intervals; ++i)
            u_[i] = u_lo + (u_hi - u_lo) * i / intervals;
        cum_[0] = 0.0;
        for (int i = 1; i <= intervals; ++i)
            cum_[i] = cum_[i - 1] +
                      maxkin::quad::gauss_legendre([&](double u) { return integrand(u); },
                                                   u_[i - 1], u_[i]);
    }

    double operator()(double v) const {
        const double u = half_line_ ? (v <= 0.0 ? 0.0 : v / (1.0 + v)) : std::atan(v);
        auto it = std::upper_bound(u_.begin(), u_.end(), u);
        if (it == u_.begin()) return 0.0;
        const auto i = static_cast<std::size_t>(it - u_.begin()) - 1;
        if (i + 1 >= u_.size()) return cum_.back();
        return cum_[i] + maxkin::quad::gauss_legendre(
                             [&](double uu) { return integrand(uu); }, u_[i], u);
    }

private:
    double integrand(double u) const {
        if (half_line_) {
            const double om = 1.0 - u;
            if (om <= 0.0) return 0.0;
            const double v = u / om;
            return maxkin::equilibria::density(spec_, v) / (om * om);
        }
        const double t = std::tan(u);
        return maxkin::equilibria::density(spec_, t) * (1.0 + t * t);
    }

    maxkin::equilibria::EquilibriumSpec spec_;
    bool half_line_;
    std::vector<double> cum_;
    std::vector<double> u_;
};

inline double ks_statistic(Eigen::ArrayXd samples, const QuadratureCdf& cdf) {
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Asymptotic one-sample KS critical value at the 1% level.
inline double ks_critical_1pct(Eigen::Index n) {
    return 1.62762 / std::sqrt(static_cast<double>(n));
}

// Brute-force minimum of the tail function over a dense delta grid:
// geometric points resolve thin negativity intervals near delta = 0,
// linear points cover the wide dips.
inline double brute_force_min_tail(double p, double q, maxkin::ModelKind kind,
                                   double delta_max = 64.0) {
    const maxkin::CollisionParams cp(p, q, kind);
    double lowest = 0.0;
    double d = 1e-8;
    while (d < 0.1) {
        lowest = std::min(lowest, maxkin::analysis::tail_function(cp, d));
        d *= 1.06;
    }
    const int linear_points = 1280;
    for (int i = 0; i <= linear_points; ++i) {
        const double dl = 0.1 + (delta_max - 0.1) * i / linear_points;
        lowest = std::min(lowest, maxkin::analysis::tail_function(cp, dl));
    }
    return lowest;
}

inline bool brute_force_negative(double p, double q, maxkin::ModelKind kind,
                                 double delta_max = 64.0) {
    return brute_force_min_tail(p, q, kind, delta_max) < -1e-13;
}

inline double sample_mean(const Eigen::ArrayXd& x) { return x.mean(); }

inline double sample_var(const Eigen::ArrayXd& x) {
    return (x - x.mean()).square().mean();
}

}  // namespace testsupport
