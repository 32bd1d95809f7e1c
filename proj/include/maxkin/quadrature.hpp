#pragma once

#include <cmath>
#include <cstddef>

namespace maxkin::quad {

// 15-point Kronrod rule with embedded 7-point Gauss rule (nodes on [-1,1]).
namespace detail {

inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * kKronrodNodes[i];
        const double v = (i == 7) ? f(c) : f(c - x) + f(c + x);
        fk += kKronrodWeights[i] * v;
        if (i % 2 == 1) fg += kGaussWeights[i / 2] * v;
    }
    kronrod = fk * h;
    err = std::abs((fk - fg) * h);
}

template <class F>
inline double adapt(const F& f, double a, double b, double tol, int depth) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e <= tol || depth <= 0) return v;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth - 1) + adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive integration over a finite interval.
template <class F>
inline double integrate(const F& f, double a, double b, double tol = 1e-11,
                        int max_depth = 48) {
    return detail::adapt(f, a, b, tol, max_depth);
}

// Integral over the whole real line via v = tan(u); algebraic tails become
// bounded integrands on (-pi/2, pi/2).
template <class F>
inline double integrate_real_line(const F& f, double tol = 1e-11) {
    const double half_pi = std::asin(1.0);
    auto g = [&](double u) {
        const double t = std::tan(u);
        const double sec2 = 1.0 + t * t;
        const double val = f(t);
        return val == 0.0 ? 0.0 : val * sec2;
    };
    return integrate(g, -half_pi, half_pi, tol);
}

// Integral over (0, inf) via v = x/(1-x).
template <class F>
inline double integrate_half_line(const F& f, double tol = 1e-11) {
    auto g = [&](double x) {
        const double om = 1.0 - x;
        if (om <= 0.0) return 0.0;
        const double v = x / om;
        const double val = f(v);
        return val == 0.0 ? 0.0 : val / (om * om);
    };
    return integrate(g, 0.0, 1.0, tol);
}

// Fixed-order Gauss-Legendre on [a,b]; enough for smooth integrands over
// narrow histogram bins.
template <class F>
inline double gauss_legendre(const F& f, double a, double b) {
    static constexpr double x[6] = {
        0.125233408511468915472441369464,  0.367831498998180193752691536644,
        0.587317954286617447296702418941,  0.769902674194304687036893833213,
        0.904117256370474856678465866119,  0.981560634246719250690549090149,
    };
    static constexpr double w[6] = {
        0.249147045813402785000562436043,  0.233492536538354808760849898925,
        0.203167426723065921749064455810,  0.160078328543346226334652529543,
        0.106939325995318430960254718194,  0.047175336386511827194615961485,
    };
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return s * h;
}

}  // namespace maxkin::quad
