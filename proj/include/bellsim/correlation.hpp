#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bellsim/experiment.hpp"
#include "bellsim/geometry.hpp"
#include "bellsim/kernels.hpp"

namespace bellsim {

/// E(a, b) = (count_pos - count_neg) / n, from integer tallies.
struct CorrelationEstimate {
    double value = 0.0;
    std::int64_t n = 0;
    std::int64_t count_pos = 0;
    std::int64_t count_neg = 0;
    std::int64_t tie_count = 0;
    double standard_error = 0.0;

    std::int64_t numerator() const noexcept { return count_pos - count_neg; }

    static CorrelationEstimate from_tally(const kernels::PairTally& tally);
};

CorrelationEstimate estimate_correlation(const TrialDatabase& db, const UnitVector& a,
                                         const UnitVector& b, unsigned workers = 1);

/// Plane for a sweep: a = origin, b(theta) = cos(theta) origin + sin(theta) toward.
struct SweepPlane {
    UnitVector origin = UnitVector::unit_z();
    UnitVector toward = UnitVector::unit_x();
};

struct CurvePoint {
    double theta;
    CorrelationEstimate estimate;
    double linear_ref;
    double singlet_ref;
};

using CorrelationCurve = std::vector<CurvePoint>;

/// Thetas must be nonempty, strictly increasing and inside [0, pi]. An
/// explicit plane must be orthonormal (within 1e-12).
CorrelationCurve sweep_correlation(const TrialDatabase& db, std::span<const double> thetas,
                                   std::optional<SweepPlane> plane = std::nullopt,
                                   unsigned workers = 1);

/// Evenly spaced grid in degrees, converted to radians and clamped into [0, pi].
std::vector<double> theta_grid_degrees(double start_deg, double stop_deg, std::size_t steps);

/// Large-n value of E under uniform spins: -1 + 2 theta / pi.
double reference_linear(double theta);

/// Singlet prediction -cos(theta).
double reference_singlet(double theta);

/// theta_rad,theta_deg,E_hat,SE,count_pos,count_neg,tie_count,E_linear,E_singlet
void write_curve_csv(std::ostream& out, const CorrelationCurve& curve);

}  // namespace bellsim
