#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxkin/collision.hpp"
#include "maxkin/decay_trace.hpp"
#include "maxkin/histogram.hpp"
#include "maxkin/rng.hpp"

namespace maxkin::sim {

// Named initial condition resolved against a model kind.
// Velocity line: uniform (default, U[-sqrt3,sqrt3]), gaussian, skewed
// (Exp(1)-1: mean 0, unit variance, third moment 2), quartic,
// student:<lambda>. Wealth half line: uniform (default, U[0,2]),
// exponential, wealth-exact, invgamma:<mu>.
struct InitialCondition {
    std::string name;
    ModelKind kind;
};

InitialCondition parse_initial_condition(std::string name, ModelKind kind);
const char* default_initial_condition(ModelKind kind);

struct ParticleEnsemble {
    Eigen::ArrayXd states;
    ModelKind kind;
    double time = 0.0;
    Rng rng;
    std::uint64_t seed = 0;
};

ParticleEnsemble make_ensemble(ModelKind kind, Eigen::Index n, std::uint64_t seed,
                               const InitialCondition& ic);

// Pair indices of all collision events of one dt step: round(N dt / 2)
// unordered pairs drawn uniformly with replacement across events.
std::vector<std::pair<std::int32_t, std::int32_t>> draw_schedule(Rng& rng,
                                                                 Eigen::Index n,
                                                                 double dt);

// Applies a prepared schedule (shared-schedule coupling between ensembles).
void apply_schedule(ParticleEnsemble& e, const CollisionParams& cp,
                    std::span<const std::pair<std::int32_t, std::int32_t>> events,
                    double dt);

// One Bird time-counter step of length dt drawn from the ensemble's stream.
void step(ParticleEnsemble& e, const CollisionParams& cp, double dt);

// Self-similar renormalization: velocity states are centered and scaled to
// unit second moment (population convention); wealth states are scaled to
// unit mean. Throws DegenerateEnsemble when the statistic is below 1e-300.
void renormalize(ParticleEnsemble& e);

struct SimRunConfig {
    Eigen::Index n = 5000;
    double dt = 0.1;
    int burnin_steps = 2000;
    int averaging_steps = 4000;
    std::uint64_t seed = 1;
    std::string ic;  // empty -> kind default
    BinSpec linear_bins;
    BinSpec log_bins;
    double tail_threshold = 4.0;

    static SimRunConfig defaults(ModelKind kind);
};

struct StationaryRun {
    Histogram hist;      // linear bins
    Histogram log_hist;  // logarithmic tail bins (|v| on the velocity line)
    metrics::DecayTrace moment_trace;   // pre-renormalization moment per step
    metrics::DecayTrace tail_fraction;  // fraction beyond tail_threshold per step
};

// Burn-in with per-step renormalization, then averaging window accumulating
// the per-snapshot histograms.
StationaryRun run_to_stationarity(const CollisionParams& cp, const SimRunConfig& config);

struct UnscaledRun {
    metrics::DecayTrace mean_trace;
    metrics::DecayTrace second_moment_trace;
};

// Free evolution without renormalization for checking the moment laws.
// Throws NumericalOverflow if a tracked moment exceeds 1e300.
UnscaledRun run_unscaled(const CollisionParams& cp, const SimRunConfig& config,
                         double horizon);

}  // namespace maxkin::sim
