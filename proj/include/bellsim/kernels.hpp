#pragma once

// Inner loops over the spin arrays. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; the public entry points
// dispatch on the ISA detected at startup. All variants must return
// identical results: the dot products are evaluated as (x*x' + y*y') + z*z'
// without fused multiply-add, and every reduction is over integers.

#include <cstdint>
#include <span>
#include <string_view>

#include "bellsim/experiment.hpp"
#include "bellsim/geometry.hpp"

namespace bellsim::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best ISA this CPU supports.
Isa detect_isa() noexcept;

/// ISA used by the dispatching entry points. Defaults to detect_isa(),
/// overridable by BELLSIM_ISA=scalar|avx2 or set_active_isa().
Isa active_isa() noexcept;

/// Forces the dispatch ISA. Returns false (and leaves the setting alone)
/// if the CPU does not support `isa`.
bool set_active_isa(Isa isa) noexcept;

bool isa_supported(Isa isa) noexcept;

/// Tally of the per-trial products sign(+s.a) * sign(-s.b).
struct PairTally {
    std::int64_t pos = 0;
    std::int64_t neg = 0;
    std::int64_t ties = 0;  // trials where either station hit sign(0)

    PairTally& operator+=(const PairTally& o) noexcept {
        pos += o.pos;
        neg += o.neg;
        ties += o.ties;
        return *this;
    }
    friend bool operator==(const PairTally&, const PairTally&) = default;
};

/// Four settings evaluated on the same trials, plus the per-trial terms
/// x1(y1 - y2) - x2(y2 + y1) computed literally.
struct QuadTally {
    PairTally e11, e12, e21, e22;
    std::int64_t term_sum = 0;
    std::int64_t term_plus2 = 0;   // trials whose term is +2
    std::int64_t term_minus2 = 0;  // trials whose term is -2
    std::int64_t term_other = 0;   // anything else; must stay zero

    QuadTally& operator+=(const QuadTally& o) noexcept {
        e11 += o.e11;
        e12 += o.e12;
        e21 += o.e21;
        e22 += o.e22;
        term_sum += o.term_sum;
        term_plus2 += o.term_plus2;
        term_minus2 += o.term_minus2;
        term_other += o.term_other;
        return *this;
    }
    friend bool operator==(const QuadTally&, const QuadTally&) = default;
};

struct QuadSettings {
    UnitVector a1, a2, b1, b2;
};

PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b);
QuadTally tally_quad(SpinView spins, const QuadSettings& q);

/// Writes one term per trial into out (out.size() == spins.size()).
void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out);

// Fixed-ISA variants; the equivalence tests compare these directly.
namespace scalar {
PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b);
QuadTally tally_quad(SpinView spins, const QuadSettings& q);
void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out);
}  // namespace scalar

namespace avx2 {
PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b);
QuadTally tally_quad(SpinView spins, const QuadSettings& q);
void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out);
}  // namespace avx2

}  // namespace bellsim::kernels
