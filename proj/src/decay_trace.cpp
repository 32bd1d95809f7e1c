#include "maxkin/decay_trace.hpp"

#include <cmath>

#include "maxkin/errors.hpp"

namespace maxkin::metrics {

void fit_log_slope(DecayTrace& trace, int begin, int end) {
    const int n = end - begin;
    if (n < 2) throw FitError("fit_log_slope: need at least 2 points");
    double st = 0.0, sy = 0.0;
    for (int i = begin; i < end; ++i) {
        if (!(trace.values[i] > 0.0))
            throw FitError("fit_log_slope: nonpositive value inside fit window");
        st += trace.times[i];
        sy += std::log(trace.values[i]);
    }
    const double tb = st / n, yb = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = begin; i < end; ++i) {
        const double dx = trace.times[i] - tb;
        sxx += dx * dx;
        sxy += dx * (std::log(trace.values[i]) - yb);
    }
    if (sxx == 0.0) throw FitError("fit_log_slope: degenerate time window");
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (int i = begin; i < end; ++i) {
        const double r = std::log(trace.values[i]) - yb - slope * (trace.times[i] - tb);
        ss_res += r * r;
    }
    trace.fitted_rate = slope;
    trace.stderr_rate = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    trace.fit_begin = begin;
    trace.fit_end = end;
}

void fit_exponential_rate(DecayTrace& trace, const FitOptions& opts) {
    const int n = static_cast<int>(trace.times.size());
    if (n < opts.min_points) throw FitError("fit_exponential_rate: too few points");
    const double t0 = trace.times.front();
    const double span = trace.times.back() - t0;
    int begin = 0;
    while (begin < n - opts.min_points &&
           trace.times[begin] < t0 + opts.skip_fraction * span)
        ++begin;
    fit_log_slope(trace, begin, n);
}

}  // namespace maxkin::metrics
