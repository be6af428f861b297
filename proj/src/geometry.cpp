#include "bellsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellsim/error.hpp"
#include "bellsim/random.hpp"

namespace bellsim {

UnitVector UnitVector::normalized(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!std::isfinite(norm) || norm == 0.0)
        throw ConfigError("direction must be finite and nonzero");
    return UnitVector(x / norm, y / norm, z / norm);
}

UnitVector UnitVector::from_components(double x, double y, double z) {
    const double n2 = x * x + y * y + z * z;
    if (!(std::abs(n2 - 1.0) <= kNormTolerance))
        throw ConfigError("not a unit vector: |v|^2 = " + std::to_string(n2));
    return UnitVector(x, y, z);
}

UnitVector sample_uniform_direction(RandomStream& stream) {
    for (;;) {
        const double x = stream.next_normal();
        const double y = stream.next_normal();
        const double z = stream.next_normal();
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (norm >= 1e-6) return UnitVector::normalized(x, y, z);
    }
}

double angle_between(const UnitVector& u, const UnitVector& v) noexcept {
    return std::acos(std::clamp(dot(u, v), -1.0, 1.0));
}

UnitVector direction_at_angle(double theta) {
    return UnitVector::normalized(std::sin(theta), 0.0, std::cos(theta));
}

UnitVector direction_in_plane(const UnitVector& u, const UnitVector& w, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return UnitVector::normalized(c * u.x() + s * w.x(), c * u.y() + s * w.y(),
                                  c * u.z() + s * w.z());
}

UnitVector any_orthogonal(const UnitVector& v) {
    // Cross with the coordinate axis least aligned with v.
    const double ax = std::abs(v.x()), ay = std::abs(v.y()), az = std::abs(v.z());
    if (ax <= ay && ax <= az) return UnitVector::normalized(0.0, -v.z(), v.y());
    if (ay <= az) return UnitVector::normalized(v.z(), 0.0, -v.x());
    return UnitVector::normalized(-v.y(), v.x(), 0.0);
}

}  // namespace bellsim
