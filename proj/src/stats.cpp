#include "bellsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellsim/correlation.hpp"
#include "bellsim/error.hpp"

namespace bellsim {

double standard_error(double value, std::int64_t n) {
    if (n < 1) throw ConfigError("n: standard error needs n >= 1");
    const double var = 1.0 - value * value;
    return var <= 0.0 ? 0.0 : std::sqrt(var / static_cast<double>(n));
}

DeviationBound hoeffding_bound(std::int64_t n, double t) {
    if (n < 1) throw ConfigError("n: Hoeffding bound needs n >= 1");
    if (!(t > 0.0)) throw ConfigError("t: Hoeffding bound needs t > 0");
    const double b = 2.0 * std::exp(-static_cast<double>(n) * t * t / 2.0);
    return {n, t, std::min(1.0, b)};
}

WithinVerdict check_within(double value, double se, double reference, double k_sigma) {
    if (!(k_sigma > 0.0)) throw ConfigError("k_sigma: must be positive");
    const double diff = value - reference;
    if (se == 0.0) {
        if (diff == 0.0) return {true, 0.0, 0.0};
        return {false, std::copysign(std::numeric_limits<double>::infinity(), diff), -std::abs(diff)};
    }
    const double margin = k_sigma * se - std::abs(diff);
    return {margin >= 0.0, diff / se, margin};
}

WithinVerdict check_within(const CorrelationEstimate& estimate, double reference, double k_sigma) {
    return check_within(estimate.value, estimate.standard_error, reference, k_sigma);
}

}  // namespace bellsim
