#include <atomic>
#include <cstdlib>
#include <string_view>

#include "bellsim/kernels.hpp"

namespace bellsim::kernels {
namespace {

Isa initial_isa() noexcept {
    const Isa best = detect_isa();
    if (const char* env = std::getenv("BELLSIM_ISA")) {
        const std::string_view v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    }
    return best;
}

std::atomic<Isa>& active() noexcept {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if BELLSIM_HAVE_AVX2
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() noexcept { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) noexcept {
    if (!isa_supported(isa)) return false;
    active().store(isa, std::memory_order_relaxed);
    return true;
}

PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b) {
    return active_isa() == Isa::avx2 ? avx2::tally_pair(spins, a, b) : scalar::tally_pair(spins, a, b);
}

QuadTally tally_quad(SpinView spins, const QuadSettings& q) {
    return active_isa() == Isa::avx2 ? avx2::tally_quad(spins, q) : scalar::tally_quad(spins, q);
}

void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out) {
    if (active_isa() == Isa::avx2)
        avx2::quad_terms(spins, q, out);
    else
        scalar::quad_terms(spins, q, out);
}

#if !BELLSIM_HAVE_AVX2
// Not reachable through dispatch; keeps the fixed-ISA entry points linkable.
namespace avx2 {
PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b) {
    return scalar::tally_pair(spins, a, b);
}
QuadTally tally_quad(SpinView spins, const QuadSettings& q) { return scalar::tally_quad(spins, q); }
void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out) {
    scalar::quad_terms(spins, q, out);
}
}  // namespace avx2
#endif

}  // namespace bellsim::kernels
