#pragma once

#include <Eigen/Core>
#include <complex>

#include "maxkin/collision.hpp"
#include "maxkin/decay_trace.hpp"
#include "maxkin/equilibria.hpp"
#include "maxkin/histogram.hpp"
#include "maxkin/simulator.hpp"

namespace maxkin::metrics {

// Empirical characteristic function (1/N) sum_k exp(-i xi v_k) on a grid.
Eigen::ArrayXcd empirical_cf(const Eigen::Ref<const Eigen::ArrayXd>& states,
                             const Eigen::Ref<const Eigen::ArrayXd>& xi_grid);

// Default frequency grid: 64 logarithmically spaced points in [0.1, 10].
Eigen::ArrayXd default_xi_grid();

// Grid estimate (a lower bound) of d_s(f,g) = sup_xi |f^ - g^| / |xi|^s.
// Real samples give conjugate-symmetric cfs, so the modulus of the
// difference is even in xi and the positive grid already covers +-xi.
// Throws GridError if the grid is empty or touches 0.
double fourier_distance(const Eigen::Ref<const Eigen::ArrayXd>& states_a,
                        const Eigen::Ref<const Eigen::ArrayXd>& states_b, double s,
                        const Eigen::Ref<const Eigen::ArrayXd>& xi_grid);

// L1 mismatch between a finalized histogram and an analytic density:
// sum_b |mass_b - integral_bin density| + histogram out-of-range mass +
// analytic mass outside the histogram range. Value in [0,2].
double l1_distance(const Histogram& hist, const equilibria::EquilibriumSpec& spec);

struct TailFit {
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    int bins_used = 0;
};

// Least-squares slope of log(mass density) vs log|v| over the log-binned
// tail histogram, restricted to [fit_lo, fit_hi]. Throws InsufficientTailData
// when fewer than 5 nonempty bins fall in range.
TailFit tail_exponent_fit(const Histogram& log_hist, double fit_lo, double fit_hi);

struct ContractionConfig {
    Eigen::Index n = 100000;
    double dt = 0.1;
    double snapshot_interval = 0.5;
    double horizon = 20.0;
    std::uint64_t seed = 1;
    std::string ic_a;  // empty -> kind default pair (see below)
    std::string ic_b;
    Eigen::ArrayXd xi_grid;      // empty -> default_xi_grid()
    double floor_mult = 3.0;     // usable while d > floor_mult * replica floor
    double skip_fraction = 0.1;  // transient dropped before fitting
    int min_points = 10;
    bool renormalize = true;  // scaled dynamics; false checks the unscaled law
};

// Kind defaults for the experiment's initial pair. The pair must differ in
// the first moment not pinned by the normalization, otherwise the slowest
// contraction mode carries no weight and the measured rate overshoots C_s:
// velocity gaussian/skewed (third moments 0 vs 2), wealth uniform/exponential.
const char* default_contraction_ic_a(ModelKind kind);
const char* default_contraction_ic_b(ModelKind kind);

struct ContractionResult {
    DecayTrace trace;                 // d_s between the two coupled ensembles
    std::vector<double> floor_trace;  // d_s between same-law replicas (noise floor)
    double predicted_rate = 0.0;      // C_s (scaled) or -(p^s+q^s-1) (unscaled)
    double fitted_decay_rate = 0.0;   // -slope over the usable window
    double ratio = 0.0;               // fitted / predicted
    bool at_noise_floor = false;      // trace never rose above the floor band
};

// Evolves two ensembles with different initial laws under a shared collision
// schedule (common random numbers), plus a same-law replica that measures the
// sampling noise floor; records d_s at every snapshot and fits the decay rate
// on the window above floor_mult times the measured floor. Throws FitError if
// the window is nonempty but shorter than min_points snapshots.
ContractionResult contraction_experiment(const CollisionParams& cp, double s,
                                         const ContractionConfig& config);

}  // namespace maxkin::metrics
