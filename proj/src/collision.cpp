#include "maxkin/collision.hpp"

#include <cmath>

#include "maxkin/errors.hpp"

namespace maxkin {

const char* to_string(ModelKind kind) {
    return kind == ModelKind::VelocityLine ? "velocity" : "wealth";
}

ModelKind parse_kind(const std::string& name) {
    if (name == "velocity") return ModelKind::VelocityLine;
    if (name == "wealth") return ModelKind::WealthHalfLine;
    throw ConfigError("unknown model kind '" + name + "' (expected velocity|wealth)");
}

CollisionParams::CollisionParams(double p_, double q_, ModelKind kind_)
    : p(p_), q(q_), kind(kind_) {
    if (!std::isfinite(p) || !std::isfinite(q) || p < 0.0 || q < 0.0)
        throw DomainError("CollisionParams: p and q must be finite and nonnegative");
}

double CollisionParams::lambda() const {
    if (q == 0.0) throw DomainError("CollisionParams::lambda undefined at q = 0");
    if (kind == ModelKind::VelocityLine) return (p - 1.0) / q;
    return (p - 1.0) * (p - 1.0) / q;
}

double CollisionParams::moment_growth_rate() const {
    if (kind == ModelKind::VelocityLine) return p * p + q * q - 1.0;
    return p + q - 1.0;
}

}  // namespace maxkin
