#include "maxkin/analysis.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "maxkin/errors.hpp"

namespace maxkin::analysis {

namespace {

// Continuous extension x log x -> 0 as x -> 0, so that the boundary of the
// admissible quadrant (and the vanishing interaction at (1,0)) is handled.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

inline double slope_at_zero(double p, double q, ModelKind kind) {
    if (kind == ModelKind::VelocityLine)
        return p * xlogx(p) + q * xlogx(q) - 0.5 * (p * p + q * q - 1.0);
    return xlogx(p) + xlogx(q) - (p + q - 1.0);
}

}  // namespace

double mean_law(const CollisionParams& cp, double m0, double t) {
    return m0 * std::exp((cp.p + cp.q - 1.0) * t);
}

double energy_law(const CollisionParams& cp, double t) {
    return std::exp((cp.p * cp.p + cp.q * cp.q - 1.0) * t);
}

double s_function(const CollisionParams& cp, double delta) {
    const double p = cp.p, q = cp.q;
    return std::pow(p, 2.0 + delta) + std::pow(q, 2.0 + delta) - 1.0 -
           0.5 * (2.0 + delta) * (p * p + q * q - 1.0);
}

double r_function(const CollisionParams& cp, double delta) {
    const double p = cp.p, q = cp.q;
    return std::pow(p, 1.0 + delta) + std::pow(q, 1.0 + delta) - 1.0 -
           (1.0 + delta) * (p + q - 1.0);
}

double tail_function(const CollisionParams& cp, double delta) {
    return cp.kind == ModelKind::VelocityLine ? s_function(cp, delta)
                                              : r_function(cp, delta);
}

double tail_slope_at_zero(const CollisionParams& cp) {
    return slope_at_zero(cp.p, cp.q, cp.kind);
}

TailReport find_delta_star(const CollisionParams& cp, double delta_max, double tol) {
    if (!(tol > 0.0)) throw DomainError("find_delta_star: tol must be > 0");
    if (!(delta_max > 0.0)) throw DomainError("find_delta_star: delta_max must be > 0");

    TailReport report;
    report.s_prime_at_zero = tail_slope_at_zero(cp);
    report.moment_growth_rate = cp.moment_growth_rate();
    if (report.s_prime_at_zero >= 0.0) return report;  // no negativity interval

    const auto f = [&](double d) { return tail_function(cp, d); };

    // Bracket the sign change by doubling. The function is negative near 0,
    // so the first delta with f > 0 closes the bracket.
    double hi = tol;
    while (hi <= delta_max && f(hi) <= 0.0) hi *= 2.0;
    if (hi > delta_max) return report;  // negative everywhere tested: no algebraic tail

    double lo = hi * 0.5;
    const int max_iter = 200;
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) < tol) {
            report.delta_star = mid;
            report.has_algebraic_tail = true;
            return report;
        }
        if (mid == lo || mid == hi) break;  // bracket collapsed to adjacent doubles
        (fm < 0.0 ? lo : hi) = mid;
    }
    throw NonConvergence("find_delta_star: bisection cannot reach |S| < tol; "
                         "tol too small for the floating representation");
}

double contraction_rate(const CollisionParams& cp, double s) {
    if (cp.kind == ModelKind::VelocityLine) {
        if (!(s > 2.0)) throw DomainError("contraction_rate: velocity kind needs s > 2");
        return -s_function(cp, s - 2.0);
    }
    if (!(s > 1.0)) throw DomainError("contraction_rate: wealth kind needs s > 1");
    return -r_function(cp, s - 1.0);
}

RegionScan negativity_region_scan(double p_lo, double p_hi, double q_lo, double q_hi,
                                  int grid_n, ModelKind kind, int threads) {
    if (grid_n < 2) throw DomainError("negativity_region_scan: grid_n must be >= 2");

    RegionScan scan;
    scan.kind = kind;
    scan.p_values = Eigen::ArrayXd::LinSpaced(grid_n, p_lo, p_hi);
    scan.q_values = Eigen::ArrayXd::LinSpaced(grid_n, q_lo, q_hi);
    scan.negative.resize(static_cast<Eigen::Index>(grid_n) * grid_n);

    const auto fill_rows = [&](int row_begin, int row_end) {
        for (int ip = row_begin; ip < row_end; ++ip)
            for (int iq = 0; iq < grid_n; ++iq)
                scan.negative[static_cast<Eigen::Index>(ip) * grid_n + iq] =
                    slope_at_zero(scan.p_values[ip], scan.q_values[iq], kind) < 0.0;
    };

    if (threads <= 1) {
        fill_rows(0, grid_n);
        return scan;
    }
    std::vector<std::thread> pool;
    const int chunk = (grid_n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int b = t * chunk;
        const int e = std::min(grid_n, b + chunk);
        if (b < e) pool.emplace_back(fill_rows, b, e);
    }
    for (auto& th : pool) th.join();
    return scan;
}

}  // namespace maxkin::analysis
