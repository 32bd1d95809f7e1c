#include "maxkin/equilibria.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "maxkin/errors.hpp"
#include "maxkin/quadrature.hpp"

namespace maxkin::equilibria {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * M_PI);

// Exponent of the generalized Student profile.
inline double gs_exponent(double lambda) { return 1.5 + 0.5 / (lambda * lambda); }

inline double log_density(const EquilibriumSpec& spec, double v) {
    switch (spec.family) {
        case Family::Maxwellian:
            return -0.5 * v * v - kLogSqrt2Pi;
        case Family::GeneralizedStudent: {
            const double l = spec.shape;
            const double k = gs_exponent(l);
            return std::log(normalization_constant(l)) - k * std::log1p(l * l * v * v);
        }
        case Family::GranularQuartic:
            return std::log(2.0 / M_PI) - 2.0 * std::log1p(v * v);
        case Family::InverseGammaPareto: {
            const double mu = spec.shape;
            return mu * std::log(mu - 1.0) - std::lgamma(mu) - (mu - 1.0) / v -
                   (1.0 + mu) * std::log(v);
        }
        case Family::WealthExact:
            return -0.5 / v - 2.5 * std::log(v) - kLogSqrt2Pi;
    }
    return -kInf;
}

}  // namespace

EquilibriumSpec EquilibriumSpec::maxwellian() { return {Family::Maxwellian, 0.0}; }

EquilibriumSpec EquilibriumSpec::generalized_student(double lambda) {
    if (!(lambda > 0.0))
        throw DomainError("GeneralizedStudent requires lambda > 0");
    return {Family::GeneralizedStudent, lambda};
}

EquilibriumSpec EquilibriumSpec::granular_quartic() {
    return {Family::GranularQuartic, 0.0};
}

EquilibriumSpec EquilibriumSpec::inverse_gamma_pareto(double mu) {
    if (!(mu > 1.0))
        throw DomainError("InverseGammaPareto requires mu > 1 (normalization undefined)");
    return {Family::InverseGammaPareto, mu};
}

EquilibriumSpec EquilibriumSpec::wealth_exact() { return {Family::WealthExact, 0.0}; }

bool EquilibriumSpec::half_line() const {
    return family == Family::InverseGammaPareto || family == Family::WealthExact;
}

double EquilibriumSpec::finite_moment_threshold() const {
    switch (family) {
        case Family::Maxwellian: return kInf;
        case Family::GeneralizedStudent: return 2.0 + 1.0 / (shape * shape);
        case Family::GranularQuartic: return 3.0;
        case Family::InverseGammaPareto: return shape;
        case Family::WealthExact: return 1.5;
    }
    return kInf;
}

std::string EquilibriumSpec::name() const {
    std::ostringstream os;
    switch (family) {
        case Family::Maxwellian: os << "maxwellian"; break;
        case Family::GeneralizedStudent: os << "generalized_student(lambda=" << shape << ")"; break;
        case Family::GranularQuartic: os << "granular_quartic"; break;
        case Family::InverseGammaPareto: os << "inverse_gamma_pareto(mu=" << shape << ")"; break;
        case Family::WealthExact: os << "wealth_exact"; break;
    }
    return os.str();
}

double normalization_constant(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("normalization_constant: lambda must be > 0");
    // Arguments grow like 1/(2 lambda^2); keep everything in logs.
    const double k = gs_exponent(lambda);
    const double log_c = std::log(lambda) - 0.5 * std::log(M_PI) + std::lgamma(k) -
                         std::lgamma(k - 0.5);
    return std::exp(log_c);
}

double density(const EquilibriumSpec& spec, double v) {
    if (spec.half_line() && v <= 0.0) return 0.0;
    return std::exp(log_density(spec, v));
}

double moment(const EquilibriumSpec& spec, double order) {
    if (!(order >= 0.0)) throw DomainError("moment: order must be >= 0");
    if (order >= spec.finite_moment_threshold()) return kInf;
    auto integrand = [&](double v) {
        const double d = density(spec, v);
        if (d == 0.0) return 0.0;
        return order == 0.0 ? d : std::pow(std::abs(v), order) * d;
    };
    if (spec.half_line()) return quad::integrate_half_line(integrand);
    return quad::integrate_real_line(integrand);
}

Eigen::ArrayXd sample(const EquilibriumSpec& spec, Rng& rng, Eigen::Index n) {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    Eigen::ArrayXd out(n);
    switch (spec.family) {
        case Family::Maxwellian:
            for (auto& x : out) x = rng.normal();
            break;
        case Family::GeneralizedStudent:
        case Family::GranularQuartic: {
            const double l = spec.family == Family::GranularQuartic ? 1.0 : spec.shape;
            // Student-t with nu = 2 + 1/l^2 dof, rescaled so the density is
            // exactly the generalized Student profile (unit second moment).
            const double nu = 2.0 + 1.0 / (l * l);
            const double sigma = 1.0 / std::sqrt(2.0 * l * l + 1.0);
            for (auto& x : out) x = sigma * rng.student_t(nu);
            break;
        }
        case Family::InverseGammaPareto:
        case Family::WealthExact: {
            const double mu = spec.family == Family::WealthExact ? 1.5 : spec.shape;
            for (auto& x : out) x = (mu - 1.0) / rng.gamma(mu);
            break;
        }
    }
    return out;
}

EquilibriumSpec from_lambda(ModelKind kind, double lambda) {
    if (kind == ModelKind::VelocityLine) {
        if (std::abs(lambda) < 1e-12) return EquilibriumSpec::maxwellian();
        if (std::abs(std::abs(lambda) - 1.0) < 1e-12)
            return EquilibriumSpec::granular_quartic();  // same density, canonical name
        return EquilibriumSpec::generalized_student(std::abs(lambda));
    }
    if (!(lambda > 0.0))
        throw DomainError("wealth equilibrium family needs lambda > 0");
    return EquilibriumSpec::inverse_gamma_pareto(1.0 + 2.0 / lambda);
}

}  // namespace maxkin::equilibria
