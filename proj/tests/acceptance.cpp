// Acceptance suite: ten end-to-end criteria covering the analytic tail
// machinery, the Monte Carlo protocol, the closed-form equilibria, and the
// Fourier-metric contraction experiments. One [PASS]/[FAIL] line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "maxkin/analysis.hpp"
#include "maxkin/commands.hpp"
#include "maxkin/equilibria.hpp"
#include "maxkin/metrics.hpp"
#include "maxkin/simulator.hpp"
#include "support.hpp"

using namespace maxkin;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string text;
    bool pass = true;
    std::string detail;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Criterion(int id_, std::string text_) : id(id_), text(std::move(text_)) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }

    void note(const std::string& info) {
        detail += (detail.empty() ? "" : "; ") + info;
    }

    ~Criterion() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%s%.1fs)\n", pass ? "PASS" : "FAIL", id,
                    text.c_str(), detail.empty() ? "" : (detail + ", ").c_str(), secs);
        std::fflush(stdout);
        if (!pass) ++g_failures;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, x);
    return buf;
}

fs::path out_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / "maxkin_acceptance" / leaf;
    fs::remove_all(dir);
    return dir;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    std::printf("maxkin acceptance suite\n");

    // Criterion 1 result feeds the tail fit of criterion 5.
    std::optional<metrics::TailFit> granular_tail_fit;

    {
        Criterion c(1, "granular exact stationarity: simulate p=0.6 q=0.4 within "
                       "L1 0.05 of the quartic state in under 60 s");
        cmd::SimulateOptions o;
        o.kind = ModelKind::VelocityLine;
        o.p = 0.6;
        o.q = 0.4;
        o.run = sim::SimRunConfig::defaults(o.kind);  // N=5000, 2000/4000 steps
        o.run.seed = 1;
        o.out = out_dir("c1");
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = cmd::run_simulate(o);
        const double secs = elapsed(t0);
        c.expect(res.overlay && res.overlay->family == equilibria::Family::GranularQuartic,
                 "overlay not the quartic state");
        c.expect(res.l1 && *res.l1 <= 0.05, "l1 " + fmt("%.4f", res.l1.value_or(9)) + " > 0.05");
        c.expect(secs < 60.0, "runtime over 60 s");
        c.note("l1=" + fmt("%.4f", res.l1.value_or(9)));
        granular_tail_fit = res.tail_fit;
    }

    {
        Criterion c(2, "Gaussian regime split: q=0.4 within 0.05 of the Maxwellian, "
                       "q=0.8 at least 3x farther");
        cmd::SimulateOptions o;
        o.kind = ModelKind::VelocityLine;
        o.p = 1.0;
        o.q = 0.4;
        o.run.seed = 1;
        o.out = out_dir("c2a");
        const auto near = cmd::run_simulate(o);
        o.q = 0.8;
        o.out = out_dir("c2b");
        const auto far = cmd::run_simulate(o);
        c.expect(near.l1 && *near.l1 <= 0.05,
                 "l1(q=0.4) " + fmt("%.4f", near.l1.value_or(9)) + " > 0.05");
        c.expect(far.l1 && *far.l1 >= 3.0 * near.l1.value_or(9),
                 "l1(q=0.8) " + fmt("%.4f", far.l1.value_or(0)) + " not 3x larger");
        c.note("l1=" + fmt("%.4f", near.l1.value_or(9)) + "/" +
               fmt("%.4f", far.l1.value_or(9)));
    }

    {
        Criterion c(3, "Fokker-Planck limit at lambda=0.5: L1 to the generalized "
                       "Student state decreases along q=0.4 -> 0.1");
        const auto run_leg = [&](double q, const char* leaf, double& secs) {
            cmd::SimulateOptions o;
            o.kind = ModelKind::VelocityLine;
            o.lambda = 0.5;
            o.q = q;
            o.run.burnin_steps = 20000;  // q=0.1 contracts at ~0.01 per unit time
            o.run.seed = 1;
            o.out = out_dir(leaf);
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = cmd::run_simulate(o);
            secs = elapsed(t0);
            return res;
        };
        double s1 = 0.0, s2 = 0.0;
        const auto leg1 = run_leg(0.4, "c3a", s1);
        const auto leg2 = run_leg(0.1, "c3b", s2);
        c.expect(leg1.l1 && leg2.l1, "missing l1");
        c.expect(leg1.params.p == 1.2 && leg2.params.p == 1.05, "derived p wrong");
        c.expect(*leg2.l1 < *leg1.l1, "not monotone: " + fmt("%.4f", *leg1.l1) + " -> " +
                                          fmt("%.4f", *leg2.l1));
        c.expect(s1 < 90.0 && s2 < 90.0, "a leg exceeded 90 s");
        c.note("l1=" + fmt("%.4f", *leg1.l1) + " -> " + fmt("%.4f", *leg2.l1));
    }

    {
        Criterion c(4, "wealth exact solution: simulate --exact-m4 q=0.1 within "
                       "L1 0.05 of the closed-form state");
        cmd::SimulateOptions o;
        o.kind = ModelKind::WealthHalfLine;
        o.q = 0.1;
        o.exact_m4 = true;
        o.run = sim::SimRunConfig::defaults(o.kind);
        o.run.seed = 1;
        o.out = out_dir("c4");
        const auto res = cmd::run_simulate(o);
        c.expect(res.overlay && res.overlay->family == equilibria::Family::WealthExact,
                 "overlay not the closed-form wealth state");
        c.expect(res.l1 && *res.l1 <= 0.05, "l1 " + fmt("%.4f", res.l1.value_or(9)) + " > 0.05");
        c.note("l1=" + fmt("%.4f", res.l1.value_or(9)));
    }

    {
        Criterion c(5, "tail-exponent identity: delta*(0.6,0.4) = 1 within 1e-8 and "
                       "the criterion-1 run fits slope -4 +- 0.4");
        const auto report =
            analysis::find_delta_star({0.6, 0.4, ModelKind::VelocityLine});
        c.expect(report.has_algebraic_tail, "no root found");
        c.expect(report.delta_star && std::abs(*report.delta_star - 1.0) <= 1e-8,
                 "delta* off by " + fmt("%.2e", std::abs(report.delta_star.value_or(0) - 1.0)));
        c.expect(granular_tail_fit.has_value(), "criterion-1 run has no tail fit");
        if (granular_tail_fit) {
            c.expect(std::abs(granular_tail_fit->exponent - (-4.0)) <= 0.4,
                     "tail exponent " + fmt("%.3f", granular_tail_fit->exponent));
            c.note("slope=" + fmt("%.3f", granular_tail_fit->exponent));
        }
    }

    {
        Criterion c(6, "delta*(q) < 4 and increasing toward 4 for lambda=0.5, "
                       "q in {0.4,0.2,0.1,0.05}");
        double prev = 0.0;
        bool ok = true;
        std::string seq;
        for (const double q : {0.4, 0.2, 0.1, 0.05}) {
            const auto r =
                analysis::find_delta_star({1.0 + 0.5 * q, q, ModelKind::VelocityLine});
            if (!r.delta_star) {
                ok = false;
                break;
            }
            ok = ok && *r.delta_star < 4.0 && *r.delta_star > prev;
            prev = *r.delta_star;
            seq += (seq.empty() ? "" : " ") + fmt("%.3f", *r.delta_star);
        }
        c.expect(ok, "sequence not increasing below 4");
        c.expect(prev > 3.8, "final delta* not approaching 4");
        c.note(seq);
    }

    {
        Criterion c(7, "moment laws over 20 seeds: E(t) log-slope 0.6 at (1.2,0.4), "
                       "0 in the conservative case, within 3 pooled SE");
        const auto pooled_slope = [](const CollisionParams& cp, double& mean,
                                     double& se) {
            std::vector<double> slopes;
            for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                sim::SimRunConfig cfg = sim::SimRunConfig::defaults(cp.kind);
                cfg.n = 5000;
                cfg.seed = seed;
                auto run = sim::run_unscaled(cp, cfg, 2.0);
                metrics::fit_exponential_rate(run.second_moment_trace, {0.0, 2});
                slopes.push_back(run.second_moment_trace.fitted_rate);
            }
            mean = 0.0;
            for (const double s : slopes) mean += s;
            mean /= static_cast<double>(slopes.size());
            double var = 0.0;
            for (const double s : slopes) var += (s - mean) * (s - mean);
            var /= static_cast<double>(slopes.size() - 1);
            se = std::sqrt(var / static_cast<double>(slopes.size()));
        };
        double mean = 0.0, se = 0.0;
        pooled_slope({1.2, 0.4, ModelKind::VelocityLine}, mean, se);
        c.expect(std::abs(mean - 0.6) <= 3.0 * se,
                 "growing slope " + fmt("%.4f", mean) + " +- " + fmt("%.4f", se));
        c.note("slope=" + fmt("%.4f", mean) + " (se " + fmt("%.4f", se) + ")");
        double mean0 = 0.0, se0 = 0.0;
        pooled_slope({0.6, 0.8, ModelKind::VelocityLine}, mean0, se0);
        c.expect(std::abs(mean0) <= 3.0 * se0,
                 "conservative slope " + fmt("%.4f", mean0) + " +- " + fmt("%.4f", se0));
        c.note("slope0=" + fmt("%.4f", mean0) + " (se " + fmt("%.4f", se0) + ")");
    }

    {
        Criterion c(8, "contraction rate at s=3, N=1e5: fitted within 30% of 0.272 "
                       "at (0.6,0.8); no decay beyond noise at (0.6,0.4)");
        cmd::ContractOptions o;
        o.kind = ModelKind::VelocityLine;
        o.p = 0.6;
        o.q = 0.8;
        o.s = 3.0;
        o.config.n = 100000;
        o.config.seed = 1;
        o.out = out_dir("c8a");
        const auto cons = cmd::run_contract(o);
        c.expect(!cons.at_noise_floor, "conservative case at noise floor");
        c.expect(std::abs(cons.fitted_decay_rate - 0.272) <= 0.3 * 0.272,
                 "rate " + fmt("%.4f", cons.fitted_decay_rate));
        c.note("rate=" + fmt("%.4f", cons.fitted_decay_rate) + " (predicted 0.272)");

        o.q = 0.4;
        o.out = out_dir("c8b");
        const auto marg = cmd::run_contract(o);
        c.expect(std::abs(marg.predicted_rate) < 1e-14, "S(1) not zero");
        c.expect(!marg.at_noise_floor, "marginal trace vanished into the floor at t=0");
        c.expect(std::abs(marg.fitted_decay_rate) <= 0.05,
                 "marginal rate " + fmt("%.4f", marg.fitted_decay_rate) + " not ~0");
        c.note("marginal rate=" + fmt("%.4f", marg.fitted_decay_rate));
    }

    {
        Criterion c(9, "equilibria integrity: unit mass, pinned moments, family "
                       "coincidences, sampler KS at the 1% level");
        using equilibria::EquilibriumSpec;
        std::vector<EquilibriumSpec> all = {
            EquilibriumSpec::maxwellian(),
            EquilibriumSpec::granular_quartic(),
            EquilibriumSpec::wealth_exact(),
        };
        for (const double lam : {0.25, 0.5, 1.0, 2.0, 4.0})
            all.push_back(EquilibriumSpec::generalized_student(lam));
        for (const double mu : {1.5, 2.0, 3.0})
            all.push_back(EquilibriumSpec::inverse_gamma_pareto(mu));
        for (const auto& spec : all)
            c.expect(std::abs(equilibria::moment(spec, 0.0) - 1.0) <= 1e-8,
                     spec.name() + " mass off 1");
        for (const double lam : {0.25, 0.5, 1.0})
            c.expect(std::abs(equilibria::moment(
                         EquilibriumSpec::generalized_student(lam), 2.0) - 1.0) <= 1e-6,
                     "student second moment lambda=" + fmt("%.2f", lam));
        for (const double mu : {1.5, 2.0, 3.0})
            c.expect(std::abs(equilibria::moment(
                         EquilibriumSpec::inverse_gamma_pareto(mu), 1.0) - 1.0) <= 1e-8,
                     "pareto mean mu=" + fmt("%.2f", mu));

        double sup = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double v = -10.0 + 0.01 * i;
            sup = std::max(sup, std::abs(equilibria::density(
                                    EquilibriumSpec::generalized_student(1.0), v) -
                                equilibria::density(EquilibriumSpec::granular_quartic(), v)));
        }
        c.expect(sup < 1e-12, "student(1)/quartic mismatch " + fmt("%.1e", sup));
        sup = 0.0;
        for (int i = 1; i <= 2000; ++i) {
            const double v = 0.005 * i;
            sup = std::max(sup, std::abs(equilibria::density(
                                    EquilibriumSpec::inverse_gamma_pareto(1.5), v) -
                                equilibria::density(EquilibriumSpec::wealth_exact(), v)));
        }
        c.expect(sup < 1e-12, "pareto(3/2)/wealth-exact mismatch " + fmt("%.1e", sup));

        const Eigen::Index n = 100000;
        const double crit = testsupport::ks_critical_1pct(n);
        std::uint64_t seed = 4001;
        for (const auto& spec : {EquilibriumSpec::maxwellian(),
                                 EquilibriumSpec::granular_quartic(),
                                 EquilibriumSpec::generalized_student(0.5),
                                 EquilibriumSpec::inverse_gamma_pareto(2.0),
                                 EquilibriumSpec::wealth_exact()}) {
            Rng rng(seed++);
            const auto x = equilibria::sample(spec, rng, n);
            const testsupport::QuadratureCdf cdf(spec);
            const double d = testsupport::ks_statistic(x, cdf);
            c.expect(d < crit, spec.name() + " KS " + fmt("%.5f", d));
        }
    }

    {
        Criterion c(10, "region scan 201x201 over [0,2]^2 matches the brute-force "
                        "delta-grid oracle in under 10 s");
        const auto t0 = std::chrono::steady_clock::now();
        const auto scan = analysis::negativity_region_scan(0.0, 2.0, 0.0, 2.0, 201);
        const double scan_secs = elapsed(t0);
        int mismatches = 0;
        for (Eigen::Index ip = 0; ip < 201; ++ip)
            for (Eigen::Index iq = 0; iq < 201; ++iq)
                if (scan.at(ip, iq) !=
                    testsupport::brute_force_negative(scan.p_values[ip],
                                                      scan.q_values[iq],
                                                      ModelKind::VelocityLine))
                    ++mismatches;
        c.expect(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
        // (0.6, 0.4) inside the negative region, (1.8, 0.4) outside.
        c.expect(scan.at(60, 40), "(0.6,0.4) not inside");
        c.expect(!scan.at(180, 40), "(1.8,0.4) not outside");
        c.expect(scan_secs < 10.0, "scan over 10 s");
        c.note("scan " + fmt("%.2f", scan_secs) + "s");
    }

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
