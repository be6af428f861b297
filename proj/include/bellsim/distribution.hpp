#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bellsim/geometry.hpp"

namespace bellsim {

class RandomStream;

struct UniformSphere {
    friend bool operator==(const UniformSphere&, const UniformSphere&) = default;
};

/// Every spin points along axis.
struct FixedAxis {
    UnitVector axis;
    friend bool operator==(const FixedAxis&, const FixedAxis&) = default;
};

/// Uniform on the spherical cap {s : angle(s, axis) <= half_angle}.
struct SphericalCap {
    UnitVector axis;
    double half_angle;  // radians, in (0, pi]
    friend bool operator==(const SphericalCap&, const SphericalCap&) = default;
};

struct Mixture;

/// Law of the spin direction of a single trial.
class DistributionSpec {
public:
    struct Component;

    DistributionSpec() = default;
    DistributionSpec(UniformSphere u) : kind_(u) {}
    DistributionSpec(FixedAxis f) : kind_(f) {}
    DistributionSpec(SphericalCap c);

    /// Components must be non-mixture specs with positive weights summing
    /// to 1 within 1e-12.
    static DistributionSpec mixture(std::vector<Component> components);

    bool is_uniform() const noexcept { return std::holds_alternative<UniformSphere>(kind_); }
    bool is_mixture() const noexcept { return std::holds_alternative<std::vector<Component>>(kind_); }

    const auto& kind() const noexcept { return kind_; }

    /// Short tag: uniform, fixed, cap or mixture.
    std::string_view tag() const noexcept;

    /// Canonical text form; parse(to_string()) reproduces the spec bit-exactly.
    std::string to_string() const;

    /// Grammar (no whitespace):
    ///   uniform
    ///   fixed:X,Y,Z
    ///   cap:X,Y,Z:DEG        half-angle in degrees
    ///   cap:X,Y,Z:RADrad     half-angle in radians
    ///   mix:W*SPEC+W*SPEC... where SPEC is any non-mixture form
    static DistributionSpec parse(std::string_view text);

    UnitVector sample(RandomStream& stream) const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&);

private:
    std::variant<UniformSphere, FixedAxis, SphericalCap, std::vector<Component>> kind_;
};

struct DistributionSpec::Component {
    double weight;
    DistributionSpec spec;
    friend bool operator==(const Component&, const Component&) = default;
};

}  // namespace bellsim
