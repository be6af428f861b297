#include <cmath>
#include <numbers>

#include "bellsim/distribution.hpp"
#include "bellsim/error.hpp"
#include "bellsim/random.hpp"
#include "doctest.h"

using namespace bellsim;

TEST_CASE("parse accepts each form") {
    CHECK(DistributionSpec::parse("uniform").is_uniform());
    const auto fixed = DistributionSpec::parse("fixed:0,0,2");
    CHECK(fixed.tag() == "fixed");
    CHECK(std::get<FixedAxis>(fixed.kind()).axis == UnitVector::unit_z());

    const auto cap = DistributionSpec::parse("cap:1,0,0:30");
    const auto& c = std::get<SphericalCap>(cap.kind());
    CHECK(c.half_angle == doctest::Approx(std::numbers::pi / 6));
    CHECK(c.axis == UnitVector::unit_x());
    CHECK(std::get<SphericalCap>(DistributionSpec::parse("cap:0,0,1:0.5rad").kind()).half_angle == 0.5);
    CHECK(std::get<SphericalCap>(DistributionSpec::parse("cap:0,0,1:180").kind()).half_angle ==
          std::numbers::pi);

    const auto mix = DistributionSpec::parse("mix:0.25*uniform+0.75*fixed:0,1,0");
    CHECK(mix.is_mixture());
    CHECK(mix.tag() == "mixture");
}

TEST_CASE("canonical text round-trips exactly") {
    RandomStream s(77, StreamDomain::user);
    for (int i = 0; i < 200; ++i) {
        const UnitVector axis = sample_uniform_direction(s);
        const double half = (0.01 + 0.99 * s.next_uniform()) * std::numbers::pi;
        const double w = 0.1 + 0.8 * s.next_uniform();
        const DistributionSpec specs[] = {
            UniformSphere{},
            FixedAxis{axis},
            SphericalCap{axis, half},
            DistributionSpec::mixture({{w, SphericalCap{axis, half}}, {1.0 - w, FixedAxis{axis}}}),
        };
        for (const auto& spec : specs) REQUIRE(DistributionSpec::parse(spec.to_string()) == spec);
    }
}

TEST_CASE("invalid specs are configuration errors") {
    for (const char* bad : {"", "cone", "fixed:1,0", "fixed:0,0,0", "fixed:a,b,c", "cap:0,0,1:0",
                            "cap:0,0,1:181", "cap:0,0,1", "mix:0.5*uniform", "mix:1.5*uniform+-0.5*uniform",
                            "mix:0.5*uniform+0.5*mix:1*uniform", "mix:uniform", "uniform "}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(DistributionSpec::parse(bad), ConfigError);
    }
    CHECK_THROWS_AS(DistributionSpec(SphericalCap{UnitVector::unit_z(), 0.0}), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::mixture({}), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::mixture({{0.5, UniformSphere{}}, {0.5 + 1e-9, UniformSphere{}}}),
                    ConfigError);
}

TEST_CASE("samples respect their support") {
    RandomStream s(5, StreamDomain::user);
    const UnitVector axis = UnitVector::normalized(1, 2, -2);
    const DistributionSpec fixed = FixedAxis{axis};
    const DistributionSpec cap = SphericalCap{axis, 0.3};
    for (int i = 0; i < 20000; ++i) {
        REQUIRE(fixed.sample(s) == axis);
        const UnitVector v = cap.sample(s);
        REQUIRE(std::acos(std::min(1.0, dot(v, axis))) <= 0.3 + 1e-9);
    }
}

TEST_CASE("cap samples are uniform in cos(angle to axis)") {
    RandomStream s(6, StreamDomain::user);
    const DistributionSpec cap = SphericalCap{UnitVector::unit_z(), std::numbers::pi / 2};
    const int n = 100000;
    double mean_z = 0;
    for (int i = 0; i < n; ++i) mean_z += cap.sample(s).z();
    mean_z /= n;
    // z ~ U[0, 1]
    CHECK(std::abs(mean_z - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("mixture weights select components in proportion") {
    RandomStream s(7, StreamDomain::user);
    const auto mix = DistributionSpec::parse("mix:0.3*fixed:0,0,1+0.7*fixed:0,0,-1");
    const int n = 100000;
    int up = 0;
    for (int i = 0; i < n; ++i) up += mix.sample(s).z() > 0 ? 1 : 0;
    CHECK(std::abs(up - 0.3 * n) < 4 * std::sqrt(n * 0.21));
}
