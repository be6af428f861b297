#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bellsim/distribution.hpp"
#include "bellsim/geometry.hpp"
#include "bellsim/random.hpp"

namespace bellsim {

/// Structure-of-arrays view of spin directions, the layout the kernels scan.
struct SpinView {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> z;

    std::size_t size() const noexcept { return x.size(); }
    SpinView subview(std::size_t offset, std::size_t count) const noexcept {
        return {x.subspan(offset, count), y.subspan(offset, count), z.subspan(offset, count)};
    }
};

/// The stored record of n trials. Trial k sends +s_k to station A and
/// -s_k to station B. Immutable once built.
class TrialDatabase {
public:
    /// Wraps already-generated spins; used by importers. All three arrays
    /// must have the same nonzero length and every row must be unit norm.
    TrialDatabase(std::uint64_t seed, DistributionSpec distribution, std::vector<double> x,
                  std::vector<double> y, std::vector<double> z);

    std::uint64_t seed() const noexcept { return seed_; }
    const DistributionSpec& distribution() const noexcept { return distribution_; }
    std::size_t size() const noexcept { return x_.size(); }

    UnitVector spin(std::size_t k) const { return UnitVector::from_components(x_[k], y_[k], z_[k]); }
    SpinView spins() const noexcept { return {x_, y_, z_}; }

    friend bool operator==(const TrialDatabase&, const TrialDatabase&) = default;

private:
    std::uint64_t seed_;
    DistributionSpec distribution_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> z_;
};

/// Trial k's spin is drawn from RandomStream(seed, spin, k), so the result
/// is independent of `workers`. Throws ConfigError for n == 0.
TrialDatabase generate_database(std::uint64_t seed, const DistributionSpec& distribution,
                                std::size_t n, unsigned workers = 1);

/// +1 for station A (receives +s), -1 for station B (receives -s).
enum class Station : int { a = +1, b = -1 };

struct Outcome {
    int value;      // always +1 or -1
    bool was_tie;   // the dot product was exactly zero; sign(0) := +1

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

Outcome measure_sign(int spin_sign, const UnitVector& s, const UnitVector& setting);

inline Outcome measure_sign(Station station, const UnitVector& s, const UnitVector& setting) {
    return measure_sign(static_cast<int>(station), s, setting);
}

struct FromDatabasePolicy {};
struct UniformPolicy {};
struct FixedPolicy {
    std::optional<UnitVector> a;
    std::optional<UnitVector> b;
};

using SettingPolicy = std::variant<FromDatabasePolicy, UniformPolicy, FixedPolicy>;

/// Draws one (a, b) pair. from-database samples db spins uniformly with
/// replacement and does not exclude any trial.
std::pair<UnitVector, UnitVector> select_settings(const SettingPolicy& policy,
                                                  const TrialDatabase& db, RandomStream& stream);

}  // namespace bellsim
