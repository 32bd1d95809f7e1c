#pragma once

#include <Eigen/Core>
#include <optional>

#include "maxkin/collision.hpp"

namespace maxkin::analysis {

// Mean law m(t) = m0 * exp{(p+q-1) t}.
double mean_law(const CollisionParams& cp, double m0, double t);

// Energy law E(t) = exp{(p^2+q^2-1) t} for unit-energy, zero-mean initial data.
double energy_law(const CollisionParams& cp, double t);

// Velocity-line tail function
//   S(d) = p^{2+d} + q^{2+d} - 1 - (2+d)/2 (p^2+q^2-1).
double s_function(const CollisionParams& cp, double delta);

// Wealth-half-line tail function
//   R(d) = p^{1+d} + q^{1+d} - 1 - (1+d)(p+q-1).
double r_function(const CollisionParams& cp, double delta);

// S or R depending on cp.kind.
double tail_function(const CollisionParams& cp, double delta);

// Derivative of the tail function at delta = 0, with the continuous
// extension 0*log 0 = 0:
//   velocity:  p^2 log p + q^2 log q - (p^2+q^2-1)/2
//   wealth:    p log p + q log q - (p+q-1)
// A negative value implies (by convexity and S(0)=0) a negativity
// interval (0, delta_bar) and hence an algebraic tail.
double tail_slope_at_zero(const CollisionParams& cp);

struct TailReport {
    double s_prime_at_zero = 0.0;
    std::optional<double> delta_star;
    bool has_algebraic_tail = false;
    double moment_growth_rate = 0.0;
};

// Locates the positive root delta* of the tail function, if any.
// If the slope at zero is >= 0 there is no negativity interval and no root.
// Otherwise the root is bracketed by doubling from delta = tol and bisected
// until |S(delta*)| < tol; if no sign change occurs below delta_max the
// function stays negative (conservative-type case) and no tail is reported.
// Throws NonConvergence when bisection exceeds its iteration cap.
TailReport find_delta_star(const CollisionParams& cp, double delta_max = 64.0,
                           double tol = 1e-10);

// Predicted exponential contraction rate of the Fourier metric d_s between
// two scaled solutions: -S(s-2) on the velocity line (s > 2), -R(s-1) on
// the wealth half line (s > 1). Positive means contraction.
double contraction_rate(const CollisionParams& cp, double s);

// Boolean map of the (p,q) plane: true where the minimum of the tail
// function is negative, decided by the slope-at-zero criterion.
struct RegionScan {
    Eigen::ArrayXd p_values;               // grid_n axis values
    Eigen::ArrayXd q_values;               // grid_n axis values
    Eigen::Array<bool, Eigen::Dynamic, 1> negative;  // row-major, index = ip*nq + iq
    ModelKind kind = ModelKind::VelocityLine;

    bool at(Eigen::Index ip, Eigen::Index iq) const {
        return negative[ip * q_values.size() + iq];
    }
};

RegionScan negativity_region_scan(double p_lo, double p_hi, double q_lo, double q_hi,
                                  int grid_n, ModelKind kind = ModelKind::VelocityLine,
                                  int threads = 1);

}  // namespace maxkin::analysis
