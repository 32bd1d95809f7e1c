#include "maxkin/simulator.hpp"

#include <cmath>

#include "maxkin/equilibria.hpp"
#include "maxkin/errors.hpp"

namespace maxkin::sim {

namespace {

double parse_shape_suffix(const std::string& name, const std::string& prefix) {
    const std::string arg = name.substr(prefix.size());
    try {
        std::size_t used = 0;
        const double x = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad parameter in initial condition '" + name + "'");
    }
}

void fill_states(const InitialCondition& ic, Rng& rng, Eigen::ArrayXd& states) {
    using equilibria::EquilibriumSpec;
    const std::string& name = ic.name;
    if (ic.kind == ModelKind::VelocityLine) {
        if (name == "uniform") {
            const double a = std::sqrt(3.0);
            for (auto& x : states) x = rng.uniform(-a, a);
        } else if (name == "gaussian" || name == "maxwellian") {
            for (auto& x : states) x = rng.normal();
        } else if (name == "skewed") {
            for (auto& x : states) x = rng.exponential() - 1.0;
        } else if (name == "quartic") {
            states = equilibria::sample(EquilibriumSpec::granular_quartic(), rng, states.size());
        } else if (name.rfind("student:", 0) == 0) {
            const double lambda = parse_shape_suffix(name, "student:");
            states = equilibria::sample(EquilibriumSpec::generalized_student(lambda), rng,
                                        states.size());
        } else {
            throw ConfigError("unknown velocity initial condition '" + name + "'");
        }
        return;
    }
    if (name == "uniform") {
        for (auto& x : states) x = rng.uniform(0.0, 2.0);
    } else if (name == "exponential") {
        for (auto& x : states) x = rng.exponential();
    } else if (name == "wealth-exact") {
        states = equilibria::sample(EquilibriumSpec::wealth_exact(), rng, states.size());
    } else if (name.rfind("invgamma:", 0) == 0) {
        const double mu = parse_shape_suffix(name, "invgamma:");
        states = equilibria::sample(EquilibriumSpec::inverse_gamma_pareto(mu), rng,
                                    states.size());
    } else {
        throw ConfigError("unknown wealth initial condition '" + name + "'");
    }
}

}  // namespace

const char* default_initial_condition(ModelKind) { return "uniform"; }

InitialCondition parse_initial_condition(std::string name, ModelKind kind) {
    if (name.empty()) name = default_initial_condition(kind);
    InitialCondition ic{std::move(name), kind};
    // Validate eagerly so config errors surface before any run starts.
    Rng probe(0);
    Eigen::ArrayXd two(2);
    fill_states(ic, probe, two);
    return ic;
}

ParticleEnsemble make_ensemble(ModelKind kind, Eigen::Index n, std::uint64_t seed,
                               const InitialCondition& ic) {
    if (n < 2) throw ConfigError("ensemble needs at least 2 particles");
    if (ic.kind != kind) throw ConfigError("initial condition kind mismatch");
    ParticleEnsemble e{Eigen::ArrayXd(n), kind, 0.0, Rng(seed), seed};
    fill_states(ic, e.rng, e.states);
    return e;
}

std::vector<std::pair<std::int32_t, std::int32_t>> draw_schedule(Rng& rng,
                                                                 Eigen::Index n,
                                                                 double dt) {
    if (!(dt > 0.0 && dt <= 1.0)) throw ConfigError("step needs 0 < dt <= 1");
    const auto events = static_cast<std::size_t>(std::llround(0.5 * n * dt));
    std::vector<std::pair<std::int32_t, std::int32_t>> schedule(events);
    const auto un = static_cast<std::uint64_t>(n);
    for (auto& ev : schedule) {
        const auto i = static_cast<std::int32_t>(rng.below(un));
        auto j = static_cast<std::int32_t>(rng.below(un - 1));
        if (j >= i) ++j;
        ev = {i, j};
    }
    return schedule;
}

void apply_schedule(ParticleEnsemble& e, const CollisionParams& cp,
                    std::span<const std::pair<std::int32_t, std::int32_t>> events,
                    double dt) {
    double* s = e.states.data();
    for (const auto& [i, j] : events) {
        const auto [vi, vj] = collide(s[i], s[j], cp);
        s[i] = vi;
        s[j] = vj;
    }
    e.time += dt;
}

void step(ParticleEnsemble& e, const CollisionParams& cp, double dt) {
    const auto schedule = draw_schedule(e.rng, e.states.size(), dt);
    apply_schedule(e, cp, schedule, dt);
}

void renormalize(ParticleEnsemble& e) {
    constexpr double kFloor = 1e-300;
    if (e.kind == ModelKind::VelocityLine) {
        const double mean = e.states.mean();
        const double sd = std::sqrt((e.states - mean).square().mean());
        if (!(sd > kFloor))
            throw DegenerateEnsemble("renormalize: second moment collapsed; "
                                     "dissipative run continued too long without renormalization");
        e.states = (e.states - mean) / sd;
    } else {
        const double mean = e.states.mean();
        if (!(mean > kFloor))
            throw DegenerateEnsemble("renormalize: mean wealth collapsed");
        e.states /= mean;
    }
}

SimRunConfig SimRunConfig::defaults(ModelKind kind) {
    SimRunConfig c;
    if (kind == ModelKind::VelocityLine) {
        c.linear_bins = BinSpec{-8.0, 8.0, 200, false, false};
        c.log_bins = BinSpec{0.1, 100.0, 120, true, true};
    } else {
        // The wealth targets have Pareto tails with mu as low as 3/2, so the
        // sample mean the renormalization divides by wobbles like N^{-1/3},
        // dilating every snapshot. 5000 particles leave a 5-6% blur in the
        // averaged histogram; 40000 particles and a longer averaging window
        // keep the worst-seed L1 under the 0.05 scale.
        c.n = 40000;
        c.averaging_steps = 20000;
        c.linear_bins = BinSpec{0.0, 10.0, 200, false, false};
        c.log_bins = BinSpec{0.01, 100.0, 160, true, false};
    }
    return c;
}

namespace {

// Pre-renormalization statistic whose growth tracks the moment laws.
inline double raw_moment(const ParticleEnsemble& e) {
    return e.kind == ModelKind::VelocityLine ? e.states.square().mean()
                                             : e.states.mean();
}

inline double raw_moment_stderr(const ParticleEnsemble& e) {
    const Eigen::ArrayXd obs = e.kind == ModelKind::VelocityLine
                                   ? e.states.square().eval()
                                   : e.states.eval();
    const double m = obs.mean();
    return std::sqrt((obs - m).square().mean() / static_cast<double>(obs.size()));
}

}  // namespace

StationaryRun run_to_stationarity(const CollisionParams& cp, const SimRunConfig& config) {
    const InitialCondition ic = parse_initial_condition(config.ic, cp.kind);
    ParticleEnsemble e = make_ensemble(cp.kind, config.n, config.seed, ic);
    renormalize(e);

    HistogramAccumulator linear(config.linear_bins);
    HistogramAccumulator logtail(config.log_bins);
    StationaryRun run;

    const int total = config.burnin_steps + config.averaging_steps;
    for (int k = 0; k < total; ++k) {
        step(e, cp, config.dt);
        run.moment_trace.push(e.time, raw_moment(e), raw_moment_stderr(e));
        renormalize(e);
        const double frac =
            cp.kind == ModelKind::VelocityLine
                ? (e.states.abs() > config.tail_threshold).cast<double>().mean()
                : (e.states > config.tail_threshold).cast<double>().mean();
        run.tail_fraction.push(
            e.time, frac,
            std::sqrt(frac * (1.0 - frac) / static_cast<double>(config.n)));
        if (k >= config.burnin_steps) {
            linear.accumulate(e.states);
            logtail.accumulate(e.states);
        }
    }
    run.hist = linear.finalize();
    run.log_hist = logtail.finalize();
    return run;
}

UnscaledRun run_unscaled(const CollisionParams& cp, const SimRunConfig& config,
                         double horizon) {
    if (!(horizon > 0.0)) throw ConfigError("run_unscaled needs horizon > 0");
    const InitialCondition ic = parse_initial_condition(config.ic, cp.kind);
    ParticleEnsemble e = make_ensemble(cp.kind, config.n, config.seed, ic);

    UnscaledRun run;
    const auto record = [&]() {
        const double m1 = e.states.mean();
        const double m2 = e.states.square().mean();
        if (!(std::abs(m1) < 1e300) || !(m2 < 1e300))
            throw NumericalOverflow(
                "run_unscaled: moment exceeded 1e300 at t=" + std::to_string(e.time) +
                "; shorten the horizon or use the scaled dynamics");
        const auto n = static_cast<double>(e.states.size());
        const double se1 = std::sqrt((e.states - m1).square().mean() / n);
        const double se2 = std::sqrt((e.states.square() - m2).square().mean() / n);
        run.mean_trace.push(e.time, m1, se1);
        run.second_moment_trace.push(e.time, m2, se2);
    };

    record();
    const int steps = static_cast<int>(std::ceil(horizon / config.dt - 1e-9));
    for (int k = 0; k < steps; ++k) {
        step(e, cp, config.dt);
        record();
    }
    return run;
}

}  // namespace maxkin::sim
