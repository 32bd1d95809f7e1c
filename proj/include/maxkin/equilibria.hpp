#pragma once

#include <Eigen/Core>
#include <string>

#include "maxkin/collision.hpp"
#include "maxkin/rng.hpp"

namespace maxkin::equilibria {

// The five closed-form stationary densities of the limiting Fokker-Planck
// equations. GeneralizedStudent, Maxwellian and GranularQuartic live on R;
// InverseGammaPareto and WealthExact on R+.
enum class Family {
    GeneralizedStudent,   // c_l (1 + l^2 v^2)^{-(3/2 + 1/(2 l^2))}
    Maxwellian,           // exp(-v^2/2)/sqrt(2 pi)
    GranularQuartic,      // (2/pi) (1 + v^2)^{-2}
    InverseGammaPareto,   // (mu-1)^mu/Gamma(mu) exp(-(mu-1)/v) v^{-(1+mu)}
    WealthExact,          // exp(-1/(2v))/(sqrt(2 pi) v^{5/2})
};

struct EquilibriumSpec {
    Family family = Family::Maxwellian;
    double shape = 0.0;  // lambda for GeneralizedStudent, mu for InverseGammaPareto

    static EquilibriumSpec maxwellian();
    static EquilibriumSpec generalized_student(double lambda);   // lambda > 0
    static EquilibriumSpec granular_quartic();
    static EquilibriumSpec inverse_gamma_pareto(double mu);      // mu > 1
    static EquilibriumSpec wealth_exact();

    bool half_line() const;
    // Orders strictly below this have finite moments; at or above, +inf.
    double finite_moment_threshold() const;
    std::string name() const;
};

// Normalization constant c_lambda = (lambda/sqrt(pi)) Gamma(k)/Gamma(k-1/2)
// with k = 3/2 + 1/(2 lambda^2), evaluated in log space.
double normalization_constant(double lambda);

// Pointwise density; zero off the support of half-line families.
double density(const EquilibriumSpec& spec, double v);

// Moment of |v|^order by adaptive quadrature with tail-compactifying
// substitutions; +inf when order reaches the family's threshold (divergence
// is decided analytically, not numerically).
double moment(const EquilibriumSpec& spec, double order);

// n i.i.d. exact draws. GeneralizedStudent uses its Student-t scale-mixture
// representation, InverseGammaPareto inverts a Gamma(mu,1) draw.
Eigen::ArrayXd sample(const EquilibriumSpec& spec, Rng& rng, Eigen::Index n);

// Family a simulated (p,q) pair converges to in the grazing limit, keyed by
// the scaling parameter lambda of the matching model kind.
EquilibriumSpec from_lambda(ModelKind kind, double lambda);

}  // namespace maxkin::equilibria
