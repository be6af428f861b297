#include "bellsim/experiment.hpp"

#include <cmath>
#include <string>

#include "bellsim/error.hpp"
#include "bellsim/parallel.hpp"

namespace bellsim {

TrialDatabase::TrialDatabase(std::uint64_t seed, DistributionSpec distribution,
                             std::vector<double> x, std::vector<double> y, std::vector<double> z)
    : seed_(seed),
      distribution_(std::move(distribution)),
      x_(std::move(x)),
      y_(std::move(y)),
      z_(std::move(z)) {
    if (x_.empty()) throw ConfigError("n: a trial database needs at least one trial");
    if (y_.size() != x_.size() || z_.size() != x_.size())
        throw ConfigError("spin component arrays differ in length");
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double n2 = x_[k] * x_[k] + y_[k] * y_[k] + z_[k] * z_[k];
        if (!(std::abs(n2 - 1.0) <= UnitVector::kNormTolerance))
            throw ConfigError("spin " + std::to_string(k) + " is not a unit vector");
    }
}

TrialDatabase generate_database(std::uint64_t seed, const DistributionSpec& distribution,
                                std::size_t n, unsigned workers) {
    if (n == 0) throw ConfigError("n: must be at least 1");
    std::vector<double> x(n), y(n), z(n);
    for_each_range(n, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            RandomStream stream(seed, StreamDomain::spin, k);
            const UnitVector s = distribution.sample(stream);
            x[k] = s.x();
            y[k] = s.y();
            z[k] = s.z();
        }
    });
    return TrialDatabase(seed, distribution, std::move(x), std::move(y), std::move(z));
}

Outcome measure_sign(int spin_sign, const UnitVector& s, const UnitVector& setting) {
    if (spin_sign != 1 && spin_sign != -1) throw ConfigError("spin sign must be +1 or -1");
    const double d = dot(s, setting);
    if (d == 0.0) return {+1, true};
    const bool positive = spin_sign > 0 ? d > 0.0 : d < 0.0;
    return {positive ? +1 : -1, false};
}

std::pair<UnitVector, UnitVector> select_settings(const SettingPolicy& policy,
                                                  const TrialDatabase& db, RandomStream& stream) {
    if (std::holds_alternative<FromDatabasePolicy>(policy)) {
        const auto i = stream.next_below(db.size());
        const auto j = stream.next_below(db.size());
        return {db.spin(i), db.spin(j)};
    }
    if (std::holds_alternative<UniformPolicy>(policy)) {
        const UnitVector a = sample_uniform_direction(stream);
        const UnitVector b = sample_uniform_direction(stream);
        return {a, b};
    }
    const auto& fixed = std::get<FixedPolicy>(policy);
    if (!fixed.a || !fixed.b) throw ConfigError("policy: fixed policy needs both settings configured");
    return {*fixed.a, *fixed.b};
}

}  // namespace bellsim
