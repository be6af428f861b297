#pragma once

// Counter-based random streams built on Philox4x32-10.
//
// A stream is addressed by (seed, domain, stream index); the block counter
// advances inside it. Two streams with different addresses never share a
// counter block, so per-trial streams can be consumed in any order or on any
// thread and still yield the same values.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

namespace bellsim {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 bijection with ten rounds.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Domain tags keep independent uses of the same seed apart.
enum class StreamDomain : std::uint32_t {
    spin = 1,          // per-trial spin directions of a database
    settings = 2,      // setting selection
    fresh = 3,         // seeds for fresh-mode databases
    search = 4,        // candidate generation for settings search
    user = 5,          // anything else (tests, CLI helpers)
};

class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double next_uniform() noexcept;

    /// Uniform in (0, 1], safe as a log argument.
    double next_uniform_open_low() noexcept;

    /// Standard normal deviate (Box-Muller; the second value of each pair is kept).
    double next_normal() noexcept;

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    PhiloxKey key_;
    PhiloxCounter counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    std::optional<double> spare_normal_;
};

}  // namespace bellsim
