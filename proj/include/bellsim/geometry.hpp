#pragma once

#include <cmath>
#include <numbers>

namespace bellsim {

class RandomStream;

/// A direction on the unit sphere. Only reachable through the factories,
/// which either normalize or check the norm.
class UnitVector {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Divides by the Euclidean norm. Throws ConfigError for a zero or
    /// non-finite input.
    static UnitVector normalized(double x, double y, double z);

    /// Accepts components that already have unit norm (within
    /// kNormTolerance on the squared norm) and stores them unchanged.
    static UnitVector from_components(double x, double y, double z);

    constexpr double x() const noexcept { return x_; }
    constexpr double y() const noexcept { return y_; }
    constexpr double z() const noexcept { return z_; }

    UnitVector operator-() const noexcept { return UnitVector(-x_, -y_, -z_); }

    friend bool operator==(const UnitVector&, const UnitVector&) = default;

    static UnitVector unit_x() noexcept { return UnitVector(1.0, 0.0, 0.0); }
    static UnitVector unit_y() noexcept { return UnitVector(0.0, 1.0, 0.0); }
    static UnitVector unit_z() noexcept { return UnitVector(0.0, 0.0, 1.0); }

private:
    constexpr UnitVector(double x, double y, double z) noexcept : x_(x), y_(y), z_(z) {}

    double x_;
    double y_;
    double z_;
};

// The kernels evaluate (x*x' + y*y') + z*z' in this order; keep them in sync.
inline double dot(const UnitVector& u, const UnitVector& v) noexcept {
    return (u.x() * v.x() + u.y() * v.y()) + u.z() * v.z();
}

/// Uniform direction on S^2 from three normal deviates.
UnitVector sample_uniform_direction(RandomStream& stream);

/// Angle in [0, pi]; the dot product is clamped before arccos.
double angle_between(const UnitVector& u, const UnitVector& v) noexcept;

/// (sin theta, 0, cos theta): the x-z plane, measured from +z.
UnitVector direction_at_angle(double theta);

/// cos(theta) * u + sin(theta) * w for an orthonormal pair (u, w).
UnitVector direction_in_plane(const UnitVector& u, const UnitVector& w, double theta);

/// Any unit vector orthogonal to v.
UnitVector any_orthogonal(const UnitVector& v);

constexpr double deg_to_rad(double deg) noexcept { return deg * (std::numbers::pi / 180.0); }
constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / std::numbers::pi); }

}  // namespace bellsim
