// Built with -mavx2 (no FMA). Only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "bellsim/kernels.hpp"

namespace bellsim::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

struct Setting {
    __m256d x, y, z;
    explicit Setting(const UnitVector& v)
        : x(_mm256_set1_pd(v.x())), y(_mm256_set1_pd(v.y())), z(_mm256_set1_pd(v.z())) {}
    __m256d dot(__m256d sx, __m256d sy, __m256d sz) const noexcept {
        return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(sx, x), _mm256_mul_pd(sy, y)),
                             _mm256_mul_pd(sz, z));
    }
};

struct Lanes {
    __m256d x, y, z;
};

inline Lanes load(const SpinView& s, std::size_t k) noexcept {
    return {_mm256_loadu_pd(s.x.data() + k), _mm256_loadu_pd(s.y.data() + k),
            _mm256_loadu_pd(s.z.data() + k)};
}

inline int bits(__m256d mask) noexcept { return _mm256_movemask_pd(mask); }
inline int count(int m) noexcept { return std::popcount(static_cast<unsigned>(m)); }

// Lane masks: all-ones where the station outcome is +1.
inline __m256d a_positive(__m256d d) noexcept { return _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_GE_OQ); }
inline __m256d b_positive(__m256d d) noexcept { return _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_LE_OQ); }
inline __m256d is_zero(__m256d d) noexcept { return _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ); }

inline void accumulate(PairTally& t, __m256d xpos, __m256d ypos, __m256d tie) noexcept {
    const int disagree = count(bits(_mm256_xor_pd(xpos, ypos)));
    t.neg += disagree;
    t.pos += static_cast<int>(kLanes) - disagree;
    t.ties += count(bits(tie));
}

inline __m256d as_sign(__m256d positive) noexcept {
    return _mm256_blendv_pd(_mm256_set1_pd(-1.0), _mm256_set1_pd(1.0), positive);
}

struct QuadLanes {
    __m256d x1p, x2p, y1p, y2p;
    __m256d ta1, ta2, tb1, tb2;
};

inline QuadLanes evaluate(const Lanes& s, const Setting& a1, const Setting& a2, const Setting& b1,
                          const Setting& b2) noexcept {
    const __m256d da1 = a1.dot(s.x, s.y, s.z), da2 = a2.dot(s.x, s.y, s.z);
    const __m256d db1 = b1.dot(s.x, s.y, s.z), db2 = b2.dot(s.x, s.y, s.z);
    return {a_positive(da1), a_positive(da2), b_positive(db1), b_positive(db2),
            is_zero(da1),    is_zero(da2),    is_zero(db1),    is_zero(db2)};
}

// x1 (y1 - y2) - x2 (y2 + y1) on +-1 doubles; exact.
inline __m256d term_of(const QuadLanes& l) noexcept {
    const __m256d x1 = as_sign(l.x1p), x2 = as_sign(l.x2p);
    const __m256d y1 = as_sign(l.y1p), y2 = as_sign(l.y2p);
    return _mm256_sub_pd(_mm256_mul_pd(x1, _mm256_sub_pd(y1, y2)),
                         _mm256_mul_pd(x2, _mm256_add_pd(y2, y1)));
}

}  // namespace

PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b) {
    const Setting sa(a), sb(b);
    const std::size_t n = spins.size();
    const std::size_t body = n - n % kLanes;
    PairTally t;
    for (std::size_t k = 0; k < body; k += kLanes) {
        const Lanes s = load(spins, k);
        const __m256d da = sa.dot(s.x, s.y, s.z);
        const __m256d db = sb.dot(s.x, s.y, s.z);
        accumulate(t, a_positive(da), b_positive(db), _mm256_or_pd(is_zero(da), is_zero(db)));
    }
    t += scalar::tally_pair(spins.subview(body, n - body), a, b);
    return t;
}

QuadTally tally_quad(SpinView spins, const QuadSettings& q) {
    const Setting a1(q.a1), a2(q.a2), b1(q.b1), b2(q.b2);
    const std::size_t n = spins.size();
    const std::size_t body = n - n % kLanes;
    const __m256d plus2 = _mm256_set1_pd(2.0), minus2 = _mm256_set1_pd(-2.0);
    __m256d sum = _mm256_setzero_pd();
    QuadTally t;
    for (std::size_t k = 0; k < body; k += kLanes) {
        const QuadLanes l = evaluate(load(spins, k), a1, a2, b1, b2);
        accumulate(t.e11, l.x1p, l.y1p, _mm256_or_pd(l.ta1, l.tb1));
        accumulate(t.e12, l.x1p, l.y2p, _mm256_or_pd(l.ta1, l.tb2));
        accumulate(t.e21, l.x2p, l.y1p, _mm256_or_pd(l.ta2, l.tb1));
        accumulate(t.e22, l.x2p, l.y2p, _mm256_or_pd(l.ta2, l.tb2));

        const __m256d term = term_of(l);
        sum = _mm256_add_pd(sum, term);
        const int p = count(bits(_mm256_cmp_pd(term, plus2, _CMP_EQ_OQ)));
        const int m = count(bits(_mm256_cmp_pd(term, minus2, _CMP_EQ_OQ)));
        t.term_plus2 += p;
        t.term_minus2 += m;
        t.term_other += static_cast<int>(kLanes) - p - m;
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, sum);
    // Partial sums are integers below 2^53, so the reduction is exact.
    t.term_sum = static_cast<std::int64_t>((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
    t += scalar::tally_quad(spins.subview(body, n - body), q);
    return t;
}

void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out) {
    const Setting a1(q.a1), a2(q.a2), b1(q.b1), b2(q.b2);
    const std::size_t n = spins.size();
    const std::size_t body = n - n % kLanes;
    alignas(16) std::int32_t lanes[kLanes];
    for (std::size_t k = 0; k < body; k += kLanes) {
        const __m256d term = term_of(evaluate(load(spins, k), a1, a2, b1, b2));
        _mm_store_si128(reinterpret_cast<__m128i*>(lanes), _mm256_cvtpd_epi32(term));
        for (std::size_t i = 0; i < kLanes; ++i) out[k + i] = static_cast<std::int8_t>(lanes[i]);
    }
    scalar::quad_terms(spins.subview(body, n - body), q, out.subspan(body));
}

}  // namespace bellsim::kernels::avx2
