#include "maxkin/metrics.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

#include "maxkin/analysis.hpp"
#include "maxkin/errors.hpp"
#include "maxkin/quadrature.hpp"

namespace maxkin::metrics {

Eigen::ArrayXcd empirical_cf(const Eigen::Ref<const Eigen::ArrayXd>& states,
                             const Eigen::Ref<const Eigen::ArrayXd>& xi_grid) {
    if (states.size() == 0 || xi_grid.size() == 0)
        throw GridError("empirical_cf: empty states or grid");
    Eigen::ArrayXcd cf(xi_grid.size());
    const double* v = states.data();
    const Eigen::Index n = states.size();
    for (Eigen::Index k = 0; k < xi_grid.size(); ++k) {
        const double xi = xi_grid[k];
        if (xi == 0.0) {
            cf[k] = std::complex<double>(1.0, 0.0);
            continue;
        }
        double re = 0.0, im = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double s, c;
#if defined(__GLIBC__)
            ::sincos(xi * v[i], &s, &c);
#else
            s = std::sin(xi * v[i]);
            c = std::cos(xi * v[i]);
#endif
            re += c;
            im -= s;
        }
        cf[k] = std::complex<double>(re / static_cast<double>(n),
                                     im / static_cast<double>(n));
    }
    return cf;
}

Eigen::ArrayXd default_xi_grid() {
    const int n = 64;
    Eigen::ArrayXd grid(n);
    const double lo = 0.1, hi = 10.0;
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = lo * std::exp(step * i);
    return grid;
}

double fourier_distance(const Eigen::Ref<const Eigen::ArrayXd>& states_a,
                        const Eigen::Ref<const Eigen::ArrayXd>& states_b, double s,
                        const Eigen::Ref<const Eigen::ArrayXd>& xi_grid) {
    if (!(s > 0.0)) throw DomainError("fourier_distance: s must be > 0");
    if (xi_grid.size() == 0) throw GridError("fourier_distance: empty grid");
    if ((xi_grid <= 0.0).any())
        throw GridError("fourier_distance: grid must be strictly positive");
    const Eigen::ArrayXcd cf_a = empirical_cf(states_a, xi_grid);
    const Eigen::ArrayXcd cf_b = empirical_cf(states_b, xi_grid);
    double best = 0.0;
    for (Eigen::Index k = 0; k < xi_grid.size(); ++k) {
        const double d = std::abs(cf_a[k] - cf_b[k]) / std::pow(xi_grid[k], s);
        if (d > best) best = d;
    }
    return best;
}

double l1_distance(const Histogram& hist, const equilibria::EquilibriumSpec& spec) {
    double inside = 0.0;
    double l1 = 0.0;
    for (Eigen::Index b = 0; b < hist.bins(); ++b) {
        const double target = quad::gauss_legendre(
            [&](double v) { return equilibria::density(spec, v); }, hist.edges[b],
            hist.edges[b + 1]);
        inside += target;
        l1 += std::abs(hist.masses[b] - target);
    }
    const double spec_outside = std::max(0.0, 1.0 - inside);
    return l1 + hist.out_of_range_mass + spec_outside;
}

TailFit tail_exponent_fit(const Histogram& log_hist, double fit_lo, double fit_hi) {
    std::vector<double> x, y;
    for (Eigen::Index b = 0; b < log_hist.bins(); ++b) {
        const double c = log_hist.log_center(b);
        if (c < fit_lo || c > fit_hi || !(log_hist.masses[b] > 0.0)) continue;
        x.push_back(std::log(c));
        y.push_back(std::log(log_hist.masses[b] / log_hist.width(b)));
    }
    const int n = static_cast<int>(x.size());
    if (n < 5)
        throw InsufficientTailData("tail_exponent_fit: fewer than 5 nonempty bins in range");
    double xb = 0.0, yb = 0.0;
    for (int i = 0; i < n; ++i) {
        xb += x[i];
        yb += y[i];
    }
    xb /= n;
    yb /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - xb) * (x[i] - xb);
        sxy += (x[i] - xb) * (y[i] - yb);
    }
    TailFit fit;
    fit.exponent = sxy / sxx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - yb - fit.exponent * (x[i] - xb);
        ss += r * r;
    }
    fit.stderr_exponent = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    fit.bins_used = n;
    return fit;
}

const char* default_contraction_ic_a(ModelKind kind) {
    return kind == ModelKind::VelocityLine ? "gaussian" : "uniform";
}

const char* default_contraction_ic_b(ModelKind kind) {
    return kind == ModelKind::VelocityLine ? "skewed" : "exponential";
}

ContractionResult contraction_experiment(const CollisionParams& cp, double s,
                                         const ContractionConfig& config) {
    const Eigen::ArrayXd grid =
        config.xi_grid.size() ? config.xi_grid : default_xi_grid();
    const std::string name_a =
        config.ic_a.empty() ? default_contraction_ic_a(cp.kind) : config.ic_a;
    const std::string name_b =
        config.ic_b.empty() ? default_contraction_ic_b(cp.kind) : config.ic_b;

    sim::ParticleEnsemble a = sim::make_ensemble(
        cp.kind, config.n, config.seed, sim::parse_initial_condition(name_a, cp.kind));
    sim::ParticleEnsemble b = sim::make_ensemble(
        cp.kind, config.n, config.seed + 1, sim::parse_initial_condition(name_b, cp.kind));
    // Same-law replica of `a`: its distance to `a` is pure sampling noise and
    // serves as the measured noise floor of the experiment.
    sim::ParticleEnsemble c = sim::make_ensemble(
        cp.kind, config.n, config.seed + 2, sim::parse_initial_condition(name_a, cp.kind));

    // Matched normalizations keep d_s finite at small xi even when sampled.
    sim::renormalize(a);
    sim::renormalize(b);
    sim::renormalize(c);

    Rng schedule_rng(config.seed + 1000003);

    ContractionResult result;
    result.predicted_rate = config.renormalize
                                ? analysis::contraction_rate(cp, s)
                                : -(std::pow(cp.p, s) + std::pow(cp.q, s) - 1.0);

    const int steps_per_snap =
        std::max(1, static_cast<int>(std::llround(config.snapshot_interval / config.dt)));
    const int snapshots =
        static_cast<int>(config.horizon / (steps_per_snap * config.dt)) + 1;

    const auto record = [&]() {
        result.trace.push(a.time, fourier_distance(a.states, b.states, s, grid));
        result.floor_trace.push_back(fourier_distance(a.states, c.states, s, grid));
    };

    record();
    for (int snap = 1; snap < snapshots; ++snap) {
        for (int k = 0; k < steps_per_snap; ++k) {
            const auto events = sim::draw_schedule(schedule_rng, config.n, config.dt);
            sim::apply_schedule(a, cp, events, config.dt);
            sim::apply_schedule(b, cp, events, config.dt);
            sim::apply_schedule(c, cp, events, config.dt);
            if (config.renormalize) {
                sim::renormalize(a);
                sim::renormalize(b);
                sim::renormalize(c);
            }
        }
        record();
    }

    // Usable window: post-transient snapshots while the signal stays above
    // the floor band. The raw replica distance is shot-noisy, so the band is
    // a 5-point running median of the floor trace.
    const int total = static_cast<int>(result.trace.times.size());
    std::vector<double> floor_band(total);
    for (int i = 0; i < total; ++i) {
        std::vector<double> w;
        for (int j = std::max(0, i - 2); j <= std::min(total - 1, i + 2); ++j)
            w.push_back(result.floor_trace[j]);
        std::nth_element(w.begin(), w.begin() + w.size() / 2, w.end());
        floor_band[i] = w[w.size() / 2];
    }
    int begin = 0;
    while (begin < total - 1 &&
           result.trace.times[begin] < config.skip_fraction * config.horizon)
        ++begin;
    int end = begin;
    while (end < total &&
           result.trace.values[end] > config.floor_mult * floor_band[end])
        ++end;

    if (end == begin) {
        result.at_noise_floor = true;
        result.fitted_decay_rate = std::numeric_limits<double>::quiet_NaN();
        result.ratio = std::numeric_limits<double>::quiet_NaN();
        return result;
    }
    if (end - begin < config.min_points)
        throw FitError("contraction_experiment: trace hit the measured noise floor "
                       "before " + std::to_string(config.min_points) +
                       " snapshots; N too small for this s");
    fit_log_slope(result.trace, begin, end);
    result.fitted_decay_rate = -result.trace.fitted_rate;
    result.ratio = result.predicted_rate != 0.0
                       ? result.fitted_decay_rate / result.predicted_rate
                       : std::numeric_limits<double>::quiet_NaN();
    return result;
}

}  // namespace maxkin::metrics
