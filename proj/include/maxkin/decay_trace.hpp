#pragma once

#include <vector>

namespace maxkin::metrics {

// Time series of a positive scalar diagnostic together with a log-linear
// least-squares fit over a window. fitted_rate is the slope of log(value)
// versus time: negative for decay, positive for growth.
struct DecayTrace {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> stderrs;  // per-point standard errors (may be empty)

    double fitted_rate = 0.0;
    double stderr_rate = 0.0;
    int fit_begin = 0;  // [fit_begin, fit_end) index window of the fit
    int fit_end = 0;

    void push(double t, double v, double se = 0.0) {
        times.push_back(t);
        values.push_back(v);
        stderrs.push_back(se);
    }
};

struct FitOptions {
    double skip_fraction = 0.1;  // drop this leading fraction of the time span
    int min_points = 2;
};

// Least-squares slope of log(values) vs times over [begin, end); fills
// fitted_rate/stderr_rate/fit window. Throws FitError on nonpositive values
// inside the window or fewer than min_points points.
void fit_log_slope(DecayTrace& trace, int begin, int end);
void fit_exponential_rate(DecayTrace& trace, const FitOptions& opts = {});

}  // namespace maxkin::metrics
