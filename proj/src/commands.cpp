#include "maxkin/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "maxkin/errors.hpp"
#include "maxkin/io.hpp"

namespace maxkin::cmd {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string comment_line(const std::string& command, const json& config) {
    return "maxkin " + command + " config_hash=" + io::config_hash(config);
}

json bin_spec_json(const BinSpec& b) {
    return json{{"lo", b.lo},
                {"hi", b.hi},
                {"bins", b.bins},
                {"log_spaced", b.log_spaced},
                {"fold_abs", b.fold_abs}};
}

json run_config_json(const sim::SimRunConfig& run) {
    return json{{"n", run.n},
                {"dt", run.dt},
                {"burnin", run.burnin_steps},
                {"averaging", run.averaging_steps},
                {"seed", run.seed},
                {"ic", run.ic},
                {"linear_bins", bin_spec_json(run.linear_bins)},
                {"log_bins", bin_spec_json(run.log_bins)},
                {"tail_threshold", run.tail_threshold}};
}

void validate_run_config(const sim::SimRunConfig& run) {
    if (run.n < 2) throw ConfigError("n must be >= 2");
    if (!(run.dt > 0.0 && run.dt <= 1.0)) throw ConfigError("dt must be in (0, 1]");
    if (run.burnin_steps < 0) throw ConfigError("burnin must be >= 0");
    if (run.averaging_steps < 1) throw ConfigError("averaging must be >= 1");
}

}  // namespace

CollisionParams resolve_params(ModelKind kind, std::optional<double> p,
                               std::optional<double> q, std::optional<double> lambda,
                               std::optional<bool> growing, bool exact_m4) {
    if (!q) throw ConfigError("q is required");
    const double qv = *q;
    if (!(qv >= 0.0)) throw ConfigError("q must be >= 0");

    if (exact_m4) {
        if (kind != ModelKind::WealthHalfLine)
            throw ConfigError("--exact-m4 applies to the wealth kind only");
        if (p || lambda) throw ConfigError("--exact-m4 conflicts with --p/--lambda");
        // p = 1 - q + eps with eps = -2 sqrt(q) + 2q; the scaled wealth model
        // then has the closed-form stationary state for q < 1/4.
        return {1.0 + qv - 2.0 * std::sqrt(qv), qv, kind};
    }
    if (lambda && p) throw ConfigError("give either (p,q) or (lambda,q), not both");
    if (lambda) {
        if (kind == ModelKind::VelocityLine) return {1.0 + *lambda * qv, qv, kind};
        if (!(*lambda > 0.0)) throw ConfigError("wealth lambda must be > 0");
        if (!growing)
            throw ConfigError("wealth lambda mode needs --growing or --shrinking "
                              "(the sign of p-1 = +-sqrt(lambda q))");
        const double eps = std::sqrt(*lambda * qv);
        const double pv = *growing ? 1.0 + eps : 1.0 - eps;
        if (pv < 0.0) throw ConfigError("derived p is negative; reduce lambda*q");
        return {pv, qv, kind};
    }
    if (!p) throw ConfigError("p is required unless lambda or --exact-m4 is given");
    return {*p, *q, kind};
}

std::optional<equilibria::EquilibriumSpec> overlay_family(const CollisionParams& cp,
                                                          bool exact_m4) {
    if (exact_m4) return equilibria::EquilibriumSpec::wealth_exact();
    if (cp.q == 0.0) return std::nullopt;
    const double lambda = cp.lambda();
    if (cp.kind == ModelKind::WealthHalfLine && lambda < 1e-12)
        return std::nullopt;  // mu -> infinity, no proper limit family
    return equilibria::from_lambda(cp.kind, lambda);
}

// ---------------------------------------------------------------- analyze

json to_json(const AnalyzeOptions& o) {
    json j{{"kind", to_string(o.kind)},
           {"region", o.region},
           {"delta_max", o.delta_max},
           {"tol", o.tol},
           {"curve_delta_hi", o.curve_delta_hi},
           {"curve_points", o.curve_points},
           {"threads", o.threads},
           {"out", o.out.string()}};
    if (o.p) j["p"] = *o.p;
    if (o.q) j["q"] = *o.q;
    if (o.region) {
        j["grid_n"] = o.grid_n;
        j["p_range"] = {o.p_lo, o.p_hi};
        j["q_range"] = {o.q_lo, o.q_hi};
    }
    return j;
}

AnalyzeResult run_analyze(const AnalyzeOptions& opts) {
    const auto t0 = Clock::now();
    if (!opts.region && (!opts.p || !opts.q))
        throw ConfigError("analyze needs --p and --q, or --region");
    const json config = to_json(opts);
    const std::string comment = comment_line("analyze", config);
    std::filesystem::create_directories(opts.out);

    AnalyzeResult result;
    if (opts.p && opts.q) {
        const CollisionParams cp(*opts.p, *opts.q, opts.kind);
        result.report = analysis::find_delta_star(cp, opts.delta_max, opts.tol);

        std::vector<std::vector<double>> rows;
        rows.reserve(opts.curve_points);
        for (int i = 0; i < opts.curve_points; ++i) {
            const double d = opts.curve_delta_hi * i / (opts.curve_points - 1);
            rows.push_back({d, analysis::tail_function(cp, d)});
        }
        const bool velocity = opts.kind == ModelKind::VelocityLine;
        io::write_csv(opts.out / (velocity ? "s_curve.csv" : "r_curve.csv"), comment,
                      "delta,value", rows);

        json report{{"p", cp.p},
                    {"q", cp.q},
                    {"kind", to_string(cp.kind)},
                    {"s_prime_at_zero", result.report->s_prime_at_zero},
                    {"has_algebraic_tail", result.report->has_algebraic_tail},
                    {"moment_growth_rate", result.report->moment_growth_rate},
                    {"delta_max", opts.delta_max},
                    {"tol", opts.tol}};
        report["delta_star"] =
            result.report->delta_star ? json(*result.report->delta_star) : json();
        std::ofstream(opts.out / "tail_report.json") << report.dump(2) << "\n";
    }

    if (opts.region) {
        result.scan = analysis::negativity_region_scan(
            opts.p_lo, opts.p_hi, opts.q_lo, opts.q_hi, opts.grid_n, opts.kind,
            opts.threads);
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(opts.grid_n) * opts.grid_n);
        for (int ip = 0; ip < opts.grid_n; ++ip)
            for (int iq = 0; iq < opts.grid_n; ++iq)
                rows.push_back({result.scan->p_values[ip], result.scan->q_values[iq],
                                result.scan->at(ip, iq) ? 1.0 : 0.0});
        io::write_csv(opts.out / "region.csv", comment, "p,q,value", rows);
    }

    io::write_manifest(opts.out / "manifest.json", "analyze", config, seconds_since(t0));
    return result;
}

// --------------------------------------------------------------- simulate

json to_json(const SimulateOptions& o, const CollisionParams& cp) {
    json j{{"kind", to_string(o.kind)},
           {"p", cp.p},
           {"q", cp.q},
           {"exact_m4", o.exact_m4},
           {"unscaled", o.unscaled},
           {"out", o.out.string()}};
    if (o.lambda) j["lambda"] = *o.lambda;
    if (o.growing) j["growing"] = *o.growing;
    if (o.unscaled) j["horizon"] = o.horizon;
    j.update(run_config_json(o.run));
    return j;
}

SimulateResult run_simulate(const SimulateOptions& opts) {
    const auto t0 = Clock::now();
    const CollisionParams cp =
        resolve_params(opts.kind, opts.p, opts.q, opts.lambda, opts.growing,
                       opts.exact_m4);

    sim::SimRunConfig run = opts.run;
    if (!opts.bins_customized) {
        const auto defaults = sim::SimRunConfig::defaults(opts.kind);
        run.linear_bins = defaults.linear_bins;
        run.log_bins = defaults.log_bins;
    }
    run.ic = sim::parse_initial_condition(run.ic, opts.kind).name;
    validate_run_config(run);

    SimulateOptions resolved = opts;
    resolved.run = run;
    const json config = to_json(resolved, cp);
    const std::string comment = comment_line("simulate", config);
    std::filesystem::create_directories(opts.out);

    SimulateResult result{cp, {}, {}, {}, {}, {}};
    json summary{{"p", cp.p}, {"q", cp.q}, {"kind", to_string(cp.kind)}};

    if (opts.unscaled) {
        auto unscaled = sim::run_unscaled(cp, run, opts.horizon);
        metrics::fit_exponential_rate(unscaled.second_moment_trace);
        summary["fitted_second_moment_rate"] = unscaled.second_moment_trace.fitted_rate;
        summary["predicted_second_moment_rate"] = cp.p * cp.p + cp.q * cp.q - 1.0;
        // The mean trace may cross zero (it is not sign-definite), so its
        // growth rate is only fitted when the whole trace stays positive.
        bool positive = true;
        for (const double v : unscaled.mean_trace.values) positive &= v > 0.0;
        if (positive) {
            metrics::fit_exponential_rate(unscaled.mean_trace);
            summary["fitted_mean_rate"] = unscaled.mean_trace.fitted_rate;
        }
        summary["predicted_mean_rate"] = cp.p + cp.q - 1.0;
        io::write_trace_csv(opts.out / "trace_mean.csv", comment, unscaled.mean_trace,
                            "value", true);
        io::write_trace_csv(opts.out / "trace_second_moment.csv", comment,
                            unscaled.second_moment_trace, "value", true);
        result.unscaled = std::move(unscaled);
    } else {
        auto stat = sim::run_to_stationarity(cp, run);
        io::write_histogram_csv(opts.out / "histogram.csv", comment, stat.hist);
        io::write_histogram_csv(opts.out / "histogram_log.csv", comment, stat.log_hist);
        io::write_trace_csv(opts.out / "trace_moment.csv", comment, stat.moment_trace,
                            "value", true);
        io::write_trace_csv(opts.out / "trace_tailfrac.csv", comment,
                            stat.tail_fraction, "value", true);

        result.overlay = overlay_family(cp, opts.exact_m4);
        if (result.overlay) {
            const auto& hist = stat.hist;
            Eigen::ArrayXd grid(2 * hist.bins() + 1);
            for (Eigen::Index b = 0; b <= hist.bins(); ++b) grid[2 * b] = hist.edges[b];
            for (Eigen::Index b = 0; b < hist.bins(); ++b)
                grid[2 * b + 1] = hist.center(b);
            io::write_density_curve_csv(opts.out / "overlay.csv",
                                        comment + " family=" + result.overlay->name(),
                                        *result.overlay, grid);
            result.l1 = metrics::l1_distance(hist, *result.overlay);
            summary["overlay_family"] = result.overlay->name();
            summary["l1_distance"] = *result.l1;
        }
        try {
            const auto fit = metrics::tail_exponent_fit(stat.log_hist, 3.0, 30.0);
            summary["tail_fit"] = json{{"exponent", fit.exponent},
                                       {"stderr", fit.stderr_exponent},
                                       {"bins_used", fit.bins_used},
                                       {"fit_range", {3.0, 30.0}}};
            result.tail_fit = fit;
        } catch (const InsufficientTailData&) {
            summary["tail_fit"] = json();  // too little mass beyond the fit range
        }
        result.stationary = std::move(stat);
    }

    std::ofstream(opts.out / "summary.json") << summary.dump(2) << "\n";
    io::write_manifest(opts.out / "manifest.json", "simulate", config, seconds_since(t0));
    return result;
}

// --------------------------------------------------------------- contract

json to_json(const ContractOptions& o, const CollisionParams& cp) {
    json j{{"kind", to_string(o.kind)},
           {"p", cp.p},
           {"q", cp.q},
           {"s", o.s},
           {"same_init", o.same_init},
           {"n", o.config.n},
           {"dt", o.config.dt},
           {"snapshot_interval", o.config.snapshot_interval},
           {"horizon", o.config.horizon},
           {"seed", o.config.seed},
           {"ic_a", o.config.ic_a},
           {"ic_b", o.config.ic_b},
           {"floor_mult", o.config.floor_mult},
           {"renormalize", o.config.renormalize},
           {"out", o.out.string()}};
    if (o.lambda) j["lambda"] = *o.lambda;
    if (o.growing) j["growing"] = *o.growing;
    return j;
}

metrics::ContractionResult run_contract(const ContractOptions& opts) {
    const auto t0 = Clock::now();
    const CollisionParams cp =
        resolve_params(opts.kind, opts.p, opts.q, opts.lambda, opts.growing, false);

    metrics::ContractionConfig config = opts.config;
    if (config.ic_a.empty()) config.ic_a = metrics::default_contraction_ic_a(opts.kind);
    if (config.ic_b.empty()) config.ic_b = metrics::default_contraction_ic_b(opts.kind);
    if (opts.same_init) config.ic_b = config.ic_a;

    ContractOptions resolved = opts;
    resolved.config = config;
    const json cfg = to_json(resolved, cp);
    const std::string comment = comment_line("contract", cfg);
    std::filesystem::create_directories(opts.out);

    const auto result = metrics::contraction_experiment(cp, opts.s, config);

    io::write_trace_csv(opts.out / "ds_trace.csv", comment, result.trace, "ds_value",
                        false);
    metrics::DecayTrace floor;
    floor.times = result.trace.times;
    floor.values = result.floor_trace;
    io::write_trace_csv(opts.out / "noise_floor.csv", comment, floor, "ds_value", false);

    json fit{{"predicted_rate", result.predicted_rate},
             {"at_noise_floor", result.at_noise_floor},
             {"floor_mult", config.floor_mult},
             {"s", opts.s}};
    if (result.at_noise_floor) {
        fit["rate"] = json();
        fit["stderr"] = json();
        fit["window"] = json();
        fit["ratio"] = json();
    } else {
        fit["rate"] = result.fitted_decay_rate;
        fit["stderr"] = result.trace.stderr_rate;
        fit["window"] = {result.trace.fit_begin, result.trace.fit_end};
        fit["ratio"] = std::isfinite(result.ratio) ? json(result.ratio) : json();
    }
    std::ofstream(opts.out / "fit.json") << fit.dump(2) << "\n";
    io::write_manifest(opts.out / "manifest.json", "contract", cfg, seconds_since(t0));
    return result;
}

// ------------------------------------------------------------------ limit

json to_json(const LimitOptions& o) {
    json j{{"kind", to_string(o.kind)},
           {"lambda", o.lambda},
           {"qs", o.qs},
           {"delta_max", o.delta_max},
           {"tol", o.tol},
           {"threads", o.threads},
           {"out", o.out.string()}};
    if (o.growing) j["growing"] = *o.growing;
    j.update(run_config_json(o.run));
    return j;
}

LimitResult run_limit(const LimitOptions& opts) {
    const auto t0 = Clock::now();
    if (opts.qs.empty()) throw ConfigError("limit needs a q schedule");
    const json config = to_json(opts);
    const std::string comment = comment_line("limit", config);
    std::filesystem::create_directories(opts.out);

    LimitResult result{{},
                       0.0,
                       opts.kind == ModelKind::VelocityLine && opts.lambda == 0.0
                           ? equilibria::EquilibriumSpec::maxwellian()
                           : equilibria::from_lambda(opts.kind, opts.lambda)};
    result.delta_fp = opts.kind == ModelKind::VelocityLine
                          ? (opts.lambda == 0.0
                                 ? std::numeric_limits<double>::infinity()
                                 : 1.0 / (opts.lambda * opts.lambda))
                          : 2.0 / opts.lambda;

    for (const double q : opts.qs) {
        LimitLeg leg;
        leg.q = q;
        try {
            const CollisionParams cp = resolve_params(
                opts.kind, std::nullopt, q, opts.lambda, opts.growing, false);
            leg.p = cp.p;

            sim::SimRunConfig run = opts.run;
            if (!opts.bins_customized) {
                const auto defaults = sim::SimRunConfig::defaults(opts.kind);
                run.linear_bins = defaults.linear_bins;
                run.log_bins = defaults.log_bins;
            }
            validate_run_config(run);

            char sub[32];
            std::snprintf(sub, sizeof(sub), "q_%g", q);
            const auto leg_dir = opts.out / sub;
            std::filesystem::create_directories(leg_dir);

            const auto stat = sim::run_to_stationarity(cp, run);
            io::write_histogram_csv(leg_dir / "histogram.csv", comment, stat.hist);
            io::write_histogram_csv(leg_dir / "histogram_log.csv", comment,
                                    stat.log_hist);
            leg.l1 = metrics::l1_distance(stat.hist, result.family);

            const auto report = analysis::find_delta_star(cp, opts.delta_max, opts.tol);
            leg.delta_star = report.delta_star;
        } catch (const std::exception& ex) {
            leg.error = ex.what();
        }
        result.legs.push_back(std::move(leg));
    }

    std::vector<std::vector<double>> conv, dstar;
    json failures = json::array();
    for (const auto& leg : result.legs) {
        if (!leg.error.empty()) {
            failures.push_back({{"q", leg.q}, {"error", leg.error}});
            continue;
        }
        conv.push_back({leg.q, leg.l1});
        dstar.push_back({leg.q,
                         leg.delta_star ? *leg.delta_star
                                        : std::numeric_limits<double>::quiet_NaN(),
                         result.delta_fp});
    }
    io::write_csv(opts.out / "convergence.csv", comment, "q,l1", conv);
    io::write_csv(opts.out / "delta_star.csv", comment, "q,delta_star,delta_fp", dstar);

    json summary{{"family", result.family.name()},
                 {"delta_fp", result.delta_fp},
                 {"failures", failures}};
    std::ofstream(opts.out / "summary.json") << summary.dump(2) << "\n";
    io::write_manifest(opts.out / "manifest.json", "limit", config, seconds_since(t0));
    return result;
}

}  // namespace maxkin::cmd
