// maxkin: numerical laboratory for one-dimensional nonconservative
// Maxwell-type kinetic models (velocity and wealth variants).
//
// Subcommands:
//   analyze   tail functions S/R, delta* root report, (p,q) negativity scan
//   simulate  Monte Carlo run to stationarity (or unscaled moment run)
//   contract  Fourier-metric contraction-rate experiment
//   limit     grazing-limit sweep q -> 0 at fixed lambda

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "maxkin/commands.hpp"
#include "maxkin/errors.hpp"
#include "maxkin/io.hpp"
#include "maxkin/version.hpp"

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw maxkin::ConfigError("cannot open config file " + path);
    try {
        return json::parse(in,
                           /*cb=*/nullptr, /*allow_exceptions=*/true,
                           /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        // e.what() carries the byte offset; line info for plain files.
        throw maxkin::ConfigError("config file " + path + ": " + e.what());
    }
}

// Command-line flags override config-file values; config-file values
// override built-in defaults.
template <class T>
void merge(const json& cfg, const char* key, const CLI::Option* opt, T& target) {
    if (opt && opt->count() > 0) return;
    if (cfg.contains(key)) {
        try {
            target = cfg.at(key).get<T>();
        } catch (const json::exception& e) {
            throw maxkin::ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

template <class T>
void merge_opt(const json& cfg, const char* key, const CLI::Option* opt, T staged,
               std::optional<T>& target) {
    if (opt && opt->count() > 0) {
        target = staged;
        return;
    }
    if (cfg.contains(key)) target = cfg.at(key).get<T>();
}

std::optional<bool> resolve_sign(const json& cfg, const CLI::Option* grow,
                                 const CLI::Option* shrink) {
    if (grow->count() && shrink->count())
        throw maxkin::ConfigError("--growing and --shrinking are mutually exclusive");
    if (grow->count()) return true;
    if (shrink->count()) return false;
    if (cfg.contains("growing")) return cfg.at("growing").get<bool>();
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxkin: one-dimensional Maxwell-type kinetic model laboratory"};
    app.set_version_flag("--version", maxkin::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    std::string out;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (default 1)");
    auto* out_opt = app.add_option("--out", out, "output directory");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads for scans/sweeps");

    // ---- analyze -------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "tail functions, delta*, region scan");
    analyze->fallthrough();
    std::string a_kind = "velocity";
    double a_p{}, a_q{}, a_delta_max = 64.0, a_tol = 1e-10, a_curve_hi = 8.0;
    int a_grid = 201, a_curve_points = 321;
    auto* a_kind_o = analyze->add_option("--kind", a_kind, "velocity|wealth");
    auto* a_p_o = analyze->add_option("--p", a_p, "mixing weight p");
    auto* a_q_o = analyze->add_option("--q", a_q, "mixing weight q");
    auto* a_region_o = analyze->add_flag("--region", "scan the (p,q) plane");
    auto* a_grid_o = analyze->add_option("--grid", a_grid, "scan grid points per axis");
    auto* a_dmax_o = analyze->add_option("--delta-max", a_delta_max, "root search ceiling");
    auto* a_tol_o = analyze->add_option("--tol", a_tol, "root tolerance");
    auto* a_chi_o = analyze->add_option("--curve-max", a_curve_hi, "curve CSV delta range");
    auto* a_cpts_o = analyze->add_option("--curve-points", a_curve_points, "curve CSV points");

    // ---- simulate ------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo kinetic run");
    simulate->fallthrough();
    std::string s_kind = "velocity", s_ic;
    double s_p{}, s_q{}, s_lambda{}, s_dt = 0.1, s_horizon = 10.0, s_tail_thresh = 4.0;
    std::vector<double> s_range, s_lrange;
    std::int64_t s_n = 5000;
    int s_burnin = 2000, s_avg = 4000, s_bins = 200, s_log_bins = 0;
    auto* s_kind_o = simulate->add_option("--kind", s_kind, "velocity|wealth");
    auto* s_p_o = simulate->add_option("--p", s_p, "mixing weight p");
    auto* s_q_o = simulate->add_option("--q", s_q, "mixing weight q");
    auto* s_lam_o = simulate->add_option("--lambda", s_lambda,
                                         "scaling parameter; derives p from q");
    auto* s_grow_o = simulate->add_flag("--growing", "wealth lambda mode: p = 1+sqrt(lambda q)");
    auto* s_shrink_o = simulate->add_flag("--shrinking", "wealth lambda mode: p = 1-sqrt(lambda q)");
    auto* s_m4_o = simulate->add_flag("--exact-m4",
                                      "wealth: p = 1-q-2*sqrt(q)+2q (closed-form stationary state)");
    auto* s_unscaled_o = simulate->add_flag("--unscaled", "skip renormalization, record moment growth");
    auto* s_horizon_o = simulate->add_option("--horizon", s_horizon, "unscaled run time horizon");
    auto* s_n_o = simulate->add_option("--n", s_n, "particles (default 5000, wealth 40000)");
    auto* s_dt_o = simulate->add_option("--dt", s_dt, "time step (default 0.1)");
    auto* s_burn_o = simulate->add_option("--burnin", s_burnin, "burn-in steps (default 2000)");
    auto* s_avg_o = simulate->add_option("--averaging", s_avg, "averaging steps (default 4000, wealth 20000)");
    auto* s_ic_o = simulate->add_option("--ic", s_ic, "initial condition name");
    auto* s_bins_o = simulate->add_option("--bins", s_bins, "linear bins");
    auto* s_range_o = simulate->add_option("--range", s_range, "linear bin range LO HI")
                          ->expected(2);
    auto* s_lbins_o = simulate->add_option("--log-bins", s_log_bins, "log-tail bins");
    auto* s_lrange_o = simulate->add_option("--log-range", s_lrange, "log bin range LO HI")
                           ->expected(2);
    auto* s_tail_o = simulate->add_option("--tail-threshold", s_tail_thresh,
                                          "tail-fraction diagnostic threshold");

    // ---- contract ------------------------------------------------------
    auto* contract = app.add_subcommand("contract", "Fourier-metric contraction experiment");
    contract->fallthrough();
    std::string c_kind = "velocity", c_ic1, c_ic2;
    double c_p{}, c_q{}, c_lambda{}, c_s = 3.0, c_dt = 0.1, c_snap = 0.5, c_horizon = 20.0;
    double c_floor_mult = 3.0;
    std::int64_t c_n = 100000;
    auto* c_kind_o = contract->add_option("--kind", c_kind, "velocity|wealth");
    auto* c_p_o = contract->add_option("--p", c_p, "mixing weight p");
    auto* c_q_o = contract->add_option("--q", c_q, "mixing weight q");
    auto* c_lam_o = contract->add_option("--lambda", c_lambda, "derive p from q");
    auto* c_grow_o = contract->add_flag("--growing", "");
    auto* c_shrink_o = contract->add_flag("--shrinking", "");
    auto* c_s_o = contract->add_option("--s", c_s, "metric order s (default 3)");
    auto* c_n_o = contract->add_option("--n", c_n, "particles (default 100000)");
    auto* c_dt_o = contract->add_option("--dt", c_dt, "time step");
    auto* c_snap_o = contract->add_option("--snapshot", c_snap, "d_s snapshot interval");
    auto* c_horizon_o = contract->add_option("--horizon", c_horizon, "experiment horizon");
    auto* c_ic1_o = contract->add_option("--ic1", c_ic1, "first initial condition");
    auto* c_ic2_o = contract->add_option("--ic2", c_ic2, "second initial condition");
    auto* c_same_o = contract->add_flag("--same-init", "use ic1 for both ensembles");
    auto* c_floor_o = contract->add_option("--floor-mult", c_floor_mult,
                                           "fit while d_s > floor_mult * measured floor");
    auto* c_unscaled_o = contract->add_flag("--unscaled",
                                            "measure the unscaled rate -(p^s+q^s-1)");

    // ---- limit ---------------------------------------------------------
    auto* limit = app.add_subcommand("limit", "grazing-limit sweep q -> 0 at fixed lambda");
    limit->fallthrough();
    std::string l_kind = "velocity", l_ic;
    double l_lambda = 0.0, l_dt = 0.1, l_delta_max = 64.0, l_tol = 1e-10;
    std::vector<double> l_qs;
    std::int64_t l_n = 5000;
    int l_burnin = 2000, l_avg = 4000;
    auto* l_kind_o = limit->add_option("--kind", l_kind, "velocity|wealth");
    auto* l_lam_o = limit->add_option("--lambda", l_lambda, "scaling parameter");
    auto* l_q_o = limit->add_option("--q", l_qs, "decreasing q schedule")->delimiter(',');
    auto* l_grow_o = limit->add_flag("--growing", "");
    auto* l_shrink_o = limit->add_flag("--shrinking", "");
    auto* l_n_o = limit->add_option("--n", l_n, "particles");
    auto* l_dt_o = limit->add_option("--dt", l_dt, "time step");
    auto* l_burn_o = limit->add_option("--burnin", l_burnin, "burn-in steps");
    auto* l_avg_o = limit->add_option("--averaging", l_avg, "averaging steps");
    auto* l_ic_o = limit->add_option("--ic", l_ic, "initial condition name");
    auto* l_dmax_o = limit->add_option("--delta-max", l_delta_max, "root search ceiling");
    auto* l_tol_o = limit->add_option("--tol", l_tol, "root tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config_file(config_path);
        merge(cfg, "seed", seed_opt, seed);
        merge(cfg, "threads", threads_opt, threads);
        merge(cfg, "out", out_opt, out);

        if (analyze->parsed()) {
            maxkin::cmd::AnalyzeOptions o;
            merge(cfg, "kind", a_kind_o, a_kind);
            o.kind = maxkin::parse_kind(a_kind);
            merge_opt(cfg, "p", a_p_o, a_p, o.p);
            merge_opt(cfg, "q", a_q_o, a_q, o.q);
            o.region = a_region_o->count() > 0 || cfg.value("region", false);
            merge(cfg, "grid", a_grid_o, a_grid);
            o.grid_n = a_grid;
            merge(cfg, "delta_max", a_dmax_o, a_delta_max);
            o.delta_max = a_delta_max;
            merge(cfg, "tol", a_tol_o, a_tol);
            o.tol = a_tol;
            merge(cfg, "curve_max", a_chi_o, a_curve_hi);
            o.curve_delta_hi = a_curve_hi;
            merge(cfg, "curve_points", a_cpts_o, a_curve_points);
            o.curve_points = a_curve_points;
            o.threads = threads;
            o.out = out.empty() ? "runs/analyze" : out;
            const auto result = maxkin::cmd::run_analyze(o);
            if (result.report) {
                std::printf("slope_at_zero %.17g  algebraic_tail %s",
                            result.report->s_prime_at_zero,
                            result.report->has_algebraic_tail ? "yes" : "no");
                if (result.report->delta_star)
                    std::printf("  delta_star %.17g", *result.report->delta_star);
                std::printf("\n");
            }
            if (result.scan) std::printf("region scan written (%d x %d)\n", o.grid_n, o.grid_n);
            std::printf("outputs in %s\n", o.out.string().c_str());
            return 0;
        }

        if (simulate->parsed()) {
            maxkin::cmd::SimulateOptions o;
            merge(cfg, "kind", s_kind_o, s_kind);
            o.kind = maxkin::parse_kind(s_kind);
            merge_opt(cfg, "p", s_p_o, s_p, o.p);
            merge_opt(cfg, "q", s_q_o, s_q, o.q);
            merge_opt(cfg, "lambda", s_lam_o, s_lambda, o.lambda);
            o.growing = resolve_sign(cfg, s_grow_o, s_shrink_o);
            o.exact_m4 = s_m4_o->count() > 0 || cfg.value("exact_m4", false);
            o.unscaled = s_unscaled_o->count() > 0 || cfg.value("unscaled", false);
            merge(cfg, "horizon", s_horizon_o, s_horizon);
            o.horizon = s_horizon;

            o.run = maxkin::sim::SimRunConfig::defaults(o.kind);
            if (s_n_o->count() || cfg.contains("n")) {  // default n is kind-dependent
                merge(cfg, "n", s_n_o, s_n);
                o.run.n = s_n;
            }
            merge(cfg, "dt", s_dt_o, s_dt);
            o.run.dt = s_dt;
            merge(cfg, "burnin", s_burn_o, s_burnin);
            o.run.burnin_steps = s_burnin;
            if (s_avg_o->count() || cfg.contains("averaging")) {
                merge(cfg, "averaging", s_avg_o, s_avg);
                o.run.averaging_steps = s_avg;
            }
            merge(cfg, "ic", s_ic_o, s_ic);
            o.run.ic = s_ic;
            merge(cfg, "tail_threshold", s_tail_o, s_tail_thresh);
            o.run.tail_threshold = s_tail_thresh;
            o.run.seed = seed;

            if (s_bins_o->count() || s_range_o->count() || s_lbins_o->count() ||
                s_lrange_o->count() || cfg.contains("bins") || cfg.contains("range")) {
                o.bins_customized = true;
                merge(cfg, "bins", s_bins_o, s_bins);
                o.run.linear_bins.bins = s_bins;
                std::vector<double> range = s_range;
                if (!s_range_o->count() && cfg.contains("range"))
                    range = cfg.at("range").get<std::vector<double>>();
                if (range.size() == 2) {
                    o.run.linear_bins.lo = range[0];
                    o.run.linear_bins.hi = range[1];
                }
                if (s_lbins_o->count() || cfg.contains("log_bins")) {
                    int lb = s_log_bins;
                    merge(cfg, "log_bins", s_lbins_o, lb);
                    if (lb > 0) o.run.log_bins.bins = lb;
                }
                std::vector<double> lrange = s_lrange;
                if (!s_lrange_o->count() && cfg.contains("log_range"))
                    lrange = cfg.at("log_range").get<std::vector<double>>();
                if (lrange.size() == 2) {
                    o.run.log_bins.lo = lrange[0];
                    o.run.log_bins.hi = lrange[1];
                }
            }
            o.out = out.empty() ? "runs/simulate" : out;
            const auto result = maxkin::cmd::run_simulate(o);
            if (result.l1)
                std::printf("l1 distance to %s: %.6g\n", result.overlay->name().c_str(),
                            *result.l1);
            if (result.tail_fit)
                std::printf("tail exponent fit: %.4g (stderr %.2g)\n",
                            result.tail_fit->exponent, result.tail_fit->stderr_exponent);
            std::printf("outputs in %s\n", o.out.string().c_str());
            return 0;
        }

        if (contract->parsed()) {
            maxkin::cmd::ContractOptions o;
            merge(cfg, "kind", c_kind_o, c_kind);
            o.kind = maxkin::parse_kind(c_kind);
            merge_opt(cfg, "p", c_p_o, c_p, o.p);
            merge_opt(cfg, "q", c_q_o, c_q, o.q);
            merge_opt(cfg, "lambda", c_lam_o, c_lambda, o.lambda);
            o.growing = resolve_sign(cfg, c_grow_o, c_shrink_o);
            merge(cfg, "s", c_s_o, c_s);
            o.s = c_s;
            o.same_init = c_same_o->count() > 0 || cfg.value("same_init", false);
            merge(cfg, "n", c_n_o, c_n);
            o.config.n = c_n;
            merge(cfg, "dt", c_dt_o, c_dt);
            o.config.dt = c_dt;
            merge(cfg, "snapshot", c_snap_o, c_snap);
            o.config.snapshot_interval = c_snap;
            merge(cfg, "horizon", c_horizon_o, c_horizon);
            o.config.horizon = c_horizon;
            merge(cfg, "ic_a", c_ic1_o, c_ic1);
            o.config.ic_a = c_ic1;
            merge(cfg, "ic_b", c_ic2_o, c_ic2);
            o.config.ic_b = c_ic2;
            merge(cfg, "floor_mult", c_floor_o, c_floor_mult);
            o.config.floor_mult = c_floor_mult;
            o.config.renormalize = !(c_unscaled_o->count() > 0 || cfg.value("unscaled", false));
            o.config.seed = seed;
            o.out = out.empty() ? "runs/contract" : out;
            const auto result = maxkin::cmd::run_contract(o);
            if (result.at_noise_floor)
                std::printf("d_s at the measured noise floor from t=0; no rate fitted\n");
            else
                std::printf("fitted rate %.6g  predicted %.6g  ratio %.3g\n",
                            result.fitted_decay_rate, result.predicted_rate, result.ratio);
            std::printf("outputs in %s\n", o.out.string().c_str());
            return 0;
        }

        if (limit->parsed()) {
            maxkin::cmd::LimitOptions o;
            merge(cfg, "kind", l_kind_o, l_kind);
            o.kind = maxkin::parse_kind(l_kind);
            merge(cfg, "lambda", l_lam_o, l_lambda);
            o.lambda = l_lambda;
            if (l_q_o->count())
                o.qs = l_qs;
            else if (cfg.contains("q"))
                o.qs = cfg.at("q").get<std::vector<double>>();
            o.growing = resolve_sign(cfg, l_grow_o, l_shrink_o);
            o.run = maxkin::sim::SimRunConfig::defaults(o.kind);
            if (l_n_o->count() || cfg.contains("n")) {
                merge(cfg, "n", l_n_o, l_n);
                o.run.n = l_n;
            }
            merge(cfg, "dt", l_dt_o, l_dt);
            o.run.dt = l_dt;
            merge(cfg, "burnin", l_burn_o, l_burnin);
            o.run.burnin_steps = l_burnin;
            if (l_avg_o->count() || cfg.contains("averaging")) {
                merge(cfg, "averaging", l_avg_o, l_avg);
                o.run.averaging_steps = l_avg;
            }
            merge(cfg, "ic", l_ic_o, l_ic);
            o.run.ic = l_ic;
            o.run.seed = seed;
            merge(cfg, "delta_max", l_dmax_o, l_delta_max);
            o.delta_max = l_delta_max;
            merge(cfg, "tol", l_tol_o, l_tol);
            o.tol = l_tol;
            o.threads = threads;
            o.out = out.empty() ? "runs/limit" : out;
            const auto result = maxkin::cmd::run_limit(o);
            int failed = 0;
            for (const auto& leg : result.legs) {
                if (!leg.error.empty()) {
                    ++failed;
                    std::fprintf(stderr, "q=%g failed: %s\n", leg.q, leg.error.c_str());
                } else {
                    const std::string ds =
                        leg.delta_star ? maxkin::io::g17(*leg.delta_star) : "none";
                    std::printf("q=%-8g p=%-10g l1=%-10.4g delta*=%s\n", leg.q, leg.p,
                                leg.l1, ds.c_str());
                }
            }
            std::printf("outputs in %s\n", o.out.string().c_str());
            return failed == static_cast<int>(result.legs.size()) ? 3 : 0;
        }
    } catch (const maxkin::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const maxkin::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const maxkin::NonConvergence& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const maxkin::DegenerateEnsemble& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const maxkin::FitError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const maxkin::NumericalOverflow& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const maxkin::InsufficientTailData& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
