#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bellsim/correlation.hpp"
#include "bellsim/error.hpp"
#include "bellsim/stats.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bellsim;
using std::numbers::pi;

TEST_CASE("equal and antipodal settings give exact -1 and +1") {
    const auto db = generate_database(4, UniformSphere{}, 20000);
    RandomStream s(4, StreamDomain::user);
    for (int i = 0; i < 20; ++i) {
        const UnitVector a = sample_uniform_direction(s);
        const auto same = estimate_correlation(db, a, a);
        REQUIRE(same.tie_count == 0);
        CHECK(same.value == -1.0);
        CHECK(same.standard_error == 0.0);
        CHECK(estimate_correlation(db, a, -a).value == 1.0);
    }
}

TEST_CASE("orthogonal settings on 1e6 uniform spins") {
    const auto db = generate_database(12345, UniformSphere{}, 1000000);
    const auto e = estimate_correlation(db, direction_at_angle(0), direction_at_angle(pi / 2));
    CHECK(std::abs(e.value) <= 0.004);
    CHECK(e.standard_error == doctest::Approx(standard_error(e.value, 1000000)));
}

TEST_CASE("estimate invariants") {
    const auto db = generate_database(5, DistributionSpec::parse("mix:0.5*uniform+0.5*fixed:0,0,1"), 5001);
    RandomStream s(5, StreamDomain::user);
    for (int i = 0; i < 200; ++i) {
        const UnitVector a = i % 5 ? sample_uniform_direction(s) : UnitVector::unit_x();
        const UnitVector b = sample_uniform_direction(s);
        const auto e = estimate_correlation(db, a, b);
        REQUIRE(e.count_pos + e.count_neg == e.n);
        REQUIRE(e.n == 5001);
        REQUIRE(e.value == static_cast<double>(e.count_pos - e.count_neg) / 5001.0);
        REQUIRE(e.value >= -1.0);
        REQUIRE(e.value <= 1.0);
        REQUIRE(e.standard_error == standard_error(e.value, e.n));
        REQUIRE(estimate_correlation(db, a, b, 7).value == e.value);
        if (e.tie_count == 0) REQUIRE(estimate_correlation(db, b, a).value == e.value);
    }
}

TEST_CASE("tie_count counts trials on the tie rule") {
    // Spins along z, settings along x: every trial ties at both stations.
    const auto db = generate_database(1, FixedAxis{UnitVector::unit_z()}, 10);
    const auto e = estimate_correlation(db, UnitVector::unit_x(), UnitVector::unit_x());
    CHECK(e.tie_count == 10);
    CHECK(e.value == 1.0);  // sign(0) := +1 at both stations
}

TEST_CASE("reference curves") {
    CHECK(reference_linear(0) == -1.0);
    CHECK(reference_linear(pi / 2) == 0.0);
    CHECK(reference_linear(pi / 4) == -0.5);
    CHECK(reference_singlet(0) == -1.0);
    CHECK(std::abs(reference_singlet(pi / 2)) < 1e-16);
    CHECK(reference_singlet(pi / 4) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));

    SUBCASE("linear law agrees with the integration oracles") {
        for (int deg = 0; deg <= 180; deg += 5) {
            const double t = deg * pi / 180;
            CAPTURE(deg);
            CHECK(std::abs(oracle::linear_law_by_quadrature(t) - reference_linear(t)) <= 1e-4);
        }
        CHECK(std::abs(oracle::linear_law_by_grid(pi / 4, 600, 600) - (-0.5)) <= 1e-3);
        CHECK(std::abs(oracle::linear_law_by_grid(pi / 2, 600, 600)) <= 1e-3);
    }
    SUBCASE("curves meet only at 0, pi/2, pi") {
        int crossings = 0;
        double max_gap = 0, arg = 0;
        const int steps = 100000;
        for (int i = 1; i < steps; ++i) {
            const double t = i * pi / steps;
            const double gap = std::abs(reference_linear(t) - reference_singlet(t));
            if (gap < 1e-12) ++crossings;
            if (gap > max_gap) {
                max_gap = gap;
                arg = t;
            }
        }
        CHECK(crossings == 1);  // pi/2; endpoints excluded from the loop
        CHECK(std::abs(reference_linear(0) - reference_singlet(0)) == 0.0);
        CHECK(std::abs(reference_linear(pi) - reference_singlet(pi)) == 0.0);
        // Gap at pi/4 is sqrt2/2 - 1/2; the maximum sits where sin(t) = 2/pi.
        CHECK(std::abs(reference_linear(pi / 4) - reference_singlet(pi / 4)) ==
              doctest::Approx(std::sqrt(2.0) / 2 - 0.5).epsilon(1e-12));
        const double t_star = std::asin(2 / pi);
        CHECK(max_gap == doctest::Approx(reference_linear(t_star) + std::cos(t_star)).epsilon(1e-8));
        const bool at_stationary = std::abs(arg - t_star) < 1e-4 || std::abs(arg - (pi - t_star)) < 1e-4;
        CHECK(at_stationary);
    }
}

TEST_CASE("sweep") {
    const auto db = generate_database(8, UniformSphere{}, 50000);
    const double zero[] = {0.0};
    const double half_turn[] = {pi};
    CHECK(sweep_correlation(db, zero).front().estimate.value == -1.0);
    CHECK(sweep_correlation(db, half_turn).front().estimate.value == 1.0);

    const auto grid = theta_grid_degrees(0, 180, 19);
    const auto curve = sweep_correlation(db, grid);
    REQUIRE(curve.size() == 19);
    for (const auto& p : curve) {
        CHECK(p.linear_ref == reference_linear(p.theta));
        CHECK(p.singlet_ref == reference_singlet(p.theta));
    }

    const double unsorted[] = {0.5, 0.2};
    const double repeated[] = {0.5, 0.5};
    const double outside[] = {-0.1};
    const double beyond[] = {3.2};
    CHECK_THROWS_AS(sweep_correlation(db, unsorted), ConfigError);
    CHECK_THROWS_AS(sweep_correlation(db, repeated), ConfigError);
    CHECK_THROWS_AS(sweep_correlation(db, outside), ConfigError);
    CHECK_THROWS_AS(sweep_correlation(db, beyond), ConfigError);
    CHECK_THROWS_AS(sweep_correlation(db, std::span<const double>{}), ConfigError);
}

TEST_CASE("sweep in an explicit plane matches the default plane on uniform data") {
    const auto db = generate_database(9, UniformSphere{}, 200000);
    const SweepPlane plane{UnitVector::unit_x(), UnitVector::unit_y()};
    const auto grid = theta_grid_degrees(0, 180, 7);
    const auto custom = sweep_correlation(db, grid, plane);
    for (const auto& p : custom) CHECK(check_within(p.estimate, p.linear_ref, 4.0).within);
    CHECK_THROWS_AS(sweep_correlation(db, grid, SweepPlane{UnitVector::unit_x(), UnitVector::unit_x()}),
                    ConfigError);
}

TEST_CASE("theta grid") {
    const auto g = theta_grid_degrees(0, 180, 181);
    CHECK(g.size() == 181);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == pi);
    CHECK(g[90] == pi / 2);
    CHECK(theta_grid_degrees(0, 0, 1) == std::vector<double>{0.0});
    CHECK_THROWS_AS(theta_grid_degrees(0, 190, 5), ConfigError);
    CHECK_THROWS_AS(theta_grid_degrees(10, 5, 5), ConfigError);
    CHECK_THROWS_AS(theta_grid_degrees(0, 180, 0), ConfigError);
}

TEST_CASE("estimates converge to the linear law across seeds") {
    // 200 seeds, n = 1e4, at a fixed angle: >= 99% within 3 SE.
    const double theta = 1.0;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto db = generate_database(seed, UniformSphere{}, 10000);
        const auto e = estimate_correlation(db, direction_at_angle(0), direction_at_angle(theta));
        inside += check_within(e, reference_linear(theta), 3.0).within;
    }
    CHECK(inside >= 198);
}

TEST_CASE("curve CSV schema") {
    const auto db = generate_database(1, UniformSphere{}, 100);
    const double grid[] = {0.0, pi};
    std::ostringstream out;
    write_curve_csv(out, sweep_correlation(db, grid));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta_rad,theta_deg,E_hat,SE,count_pos,count_neg,tie_count,E_linear,E_singlet");
    std::getline(in, line);
    CHECK(line == "0,0,-1,0,0,100,0,-1,-1");
    std::getline(in, line);
    CHECK(line == "3.1415926535897931,180,1,0,100,0,0,1,1");
}
