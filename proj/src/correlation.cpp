#include "bellsim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "bellsim/error.hpp"
#include "bellsim/parallel.hpp"
#include "bellsim/stats.hpp"
#include "text_format.hpp"

namespace bellsim {

CorrelationEstimate CorrelationEstimate::from_tally(const kernels::PairTally& t) {
    CorrelationEstimate e;
    e.n = t.pos + t.neg;
    e.count_pos = t.pos;
    e.count_neg = t.neg;
    e.tie_count = t.ties;
    e.value = static_cast<double>(t.pos - t.neg) / static_cast<double>(e.n);
    e.standard_error = bellsim::standard_error(e.value, e.n);
    return e;
}

CorrelationEstimate estimate_correlation(const TrialDatabase& db, const UnitVector& a,
                                         const UnitVector& b, unsigned workers) {
    const SpinView spins = db.spins();
    std::vector<kernels::PairTally> partial(std::max(1u, workers));
    for_each_range(spins.size(), workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
        partial[w] = kernels::tally_pair(spins.subview(begin, end - begin), a, b);
    });
    kernels::PairTally total;
    for (const auto& p : partial) total += p;
    return CorrelationEstimate::from_tally(total);
}

CorrelationCurve sweep_correlation(const TrialDatabase& db, std::span<const double> thetas,
                                   std::optional<SweepPlane> plane, unsigned workers) {
    if (thetas.empty()) throw ConfigError("theta grid: must not be empty");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(thetas[i] >= 0.0 && thetas[i] <= std::numbers::pi))
            throw ConfigError("theta grid: values must lie in [0, pi]");
        if (i > 0 && !(thetas[i] > thetas[i - 1]))
            throw ConfigError("theta grid: values must be strictly increasing");
    }
    if (plane && std::abs(dot(plane->origin, plane->toward)) > 1e-12)
        throw ConfigError("plane: the two vectors must be orthogonal");

    CorrelationCurve curve;
    curve.reserve(thetas.size());
    for (const double theta : thetas) {
        const UnitVector a = plane ? plane->origin : direction_at_angle(0.0);
        const UnitVector b = plane ? direction_in_plane(plane->origin, plane->toward, theta)
                                   : direction_at_angle(theta);
        curve.push_back({theta, estimate_correlation(db, a, b, workers), reference_linear(theta),
                         reference_singlet(theta)});
    }
    return curve;
}

std::vector<double> theta_grid_degrees(double start_deg, double stop_deg, std::size_t steps) {
    if (steps < 1) throw ConfigError("steps: must be at least 1");
    if (!(start_deg >= 0.0 && stop_deg <= 180.0 && start_deg <= stop_deg))
        throw ConfigError("start/stop: need 0 <= start <= stop <= 180 degrees");
    if (steps > 1 && !(start_deg < stop_deg))
        throw ConfigError("start/stop: need start < stop when steps > 1");
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double deg = i + 1 == steps && steps > 1
                               ? stop_deg
                               : start_deg + (stop_deg - start_deg) * static_cast<double>(i) /
                                                 static_cast<double>(steps > 1 ? steps - 1 : 1);
        grid[i] = std::clamp(deg_to_rad(deg), 0.0, std::numbers::pi);
    }
    return grid;
}

double reference_linear(double theta) { return -1.0 + 2.0 * theta / std::numbers::pi; }

double reference_singlet(double theta) { return -std::cos(theta); }

void write_curve_csv(std::ostream& out, const CorrelationCurve& curve) {
    using detail::format_g17;
    out << "theta_rad,theta_deg,E_hat,SE,count_pos,count_neg,tie_count,E_linear,E_singlet\n";
    for (const auto& p : curve) {
        out << format_g17(p.theta) << ',' << format_g17(rad_to_deg(p.theta)) << ','
            << format_g17(p.estimate.value) << ',' << format_g17(p.estimate.standard_error) << ','
            << p.estimate.count_pos << ',' << p.estimate.count_neg << ',' << p.estimate.tie_count
            << ',' << format_g17(p.linear_ref) << ',' << format_g17(p.singlet_ref) << '\n';
    }
}

}  // namespace bellsim
