#pragma once

#include <string>
#include <utility>

namespace maxkin {

// Which one-dimensional model the states live on: velocities on the whole
// real line, or wealths on the nonnegative half line.
enum class ModelKind { VelocityLine, WealthHalfLine };

const char* to_string(ModelKind kind);
ModelKind parse_kind(const std::string& name);

// Mixing pair (p,q) of the binary interaction v* = p v + q w, w* = q v + p w.
struct CollisionParams {
    double p;
    double q;
    ModelKind kind;

    CollisionParams(double p_, double q_, ModelKind kind_);

    double jacobian() const { return p * p - q * q; }

    // Grazing parameter of the Fokker-Planck limit: (p-1)/q on the velocity
    // line, (p-1)^2/q on the wealth half line. Undefined at q = 0.
    double lambda() const;

    // Exponential rate of the unscaled conserved-quantity law:
    // p^2+q^2-1 for the energy (velocity), p+q-1 for the mean (wealth).
    double moment_growth_rate() const;
};

// Post-collision pair (p v + q w, q v + p w).
inline std::pair<double, double> collide(double v, double w, const CollisionParams& cp) {
    return {cp.p * v + cp.q * w, cp.q * v + cp.p * w};
}

}  // namespace maxkin
