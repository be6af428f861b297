#pragma once

#include <cstdint>

namespace bellsim {

struct CorrelationEstimate;

/// sqrt((1 - value^2) / n); zero at |value| = 1.
double standard_error(double value, std::int64_t n);

/// Two-sided Hoeffding bound for the mean of n variables valued in [-1, 1]:
/// P(|mean - E mean| >= t) <= min(1, 2 exp(-n t^2 / 2)).
struct DeviationBound {
    std::int64_t n;
    double t;
    double bound;
};

DeviationBound hoeffding_bound(std::int64_t n, double t);

struct WithinVerdict {
    bool within;
    double z;       // (value - reference) / SE; +-inf when SE = 0 and they differ, 0 when equal
    double margin;  // k_sigma * SE - |value - reference|; negative on failure
};

/// |value - reference| <= k_sigma * SE. With SE = 0 this is exact equality.
WithinVerdict check_within(double value, double standard_error, double reference, double k_sigma);
WithinVerdict check_within(const CorrelationEstimate& estimate, double reference, double k_sigma);

}  // namespace bellsim
