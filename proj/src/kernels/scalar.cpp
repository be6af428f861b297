#include "bellsim/kernels.hpp"

namespace bellsim::kernels::scalar {
namespace {

struct Setting {
    double x, y, z;
    explicit Setting(const UnitVector& v) : x(v.x()), y(v.y()), z(v.z()) {}
    double dot(double sx, double sy, double sz) const noexcept { return (sx * x + sy * y) + sz * z; }
};

// sign(+s.a) and sign(-s.b) with sign(0) := +1.
inline int station_a_sign(double d) noexcept { return d >= 0.0 ? 1 : -1; }
inline int station_b_sign(double d) noexcept { return d <= 0.0 ? 1 : -1; }

inline void accumulate(PairTally& t, int x, int y, bool tie) noexcept {
    if (x * y > 0)
        ++t.pos;
    else
        ++t.neg;
    t.ties += tie ? 1 : 0;
}

}  // namespace

PairTally tally_pair(SpinView spins, const UnitVector& a, const UnitVector& b) {
    const Setting sa(a), sb(b);
    PairTally t;
    for (std::size_t k = 0; k < spins.size(); ++k) {
        const double da = sa.dot(spins.x[k], spins.y[k], spins.z[k]);
        const double db = sb.dot(spins.x[k], spins.y[k], spins.z[k]);
        accumulate(t, station_a_sign(da), station_b_sign(db), da == 0.0 || db == 0.0);
    }
    return t;
}

QuadTally tally_quad(SpinView spins, const QuadSettings& q) {
    const Setting a1(q.a1), a2(q.a2), b1(q.b1), b2(q.b2);
    QuadTally t;
    for (std::size_t k = 0; k < spins.size(); ++k) {
        const double sx = spins.x[k], sy = spins.y[k], sz = spins.z[k];
        const double da1 = a1.dot(sx, sy, sz), da2 = a2.dot(sx, sy, sz);
        const double db1 = b1.dot(sx, sy, sz), db2 = b2.dot(sx, sy, sz);
        const int x1 = station_a_sign(da1), x2 = station_a_sign(da2);
        const int y1 = station_b_sign(db1), y2 = station_b_sign(db2);
        const bool ta1 = da1 == 0.0, ta2 = da2 == 0.0, tb1 = db1 == 0.0, tb2 = db2 == 0.0;
        accumulate(t.e11, x1, y1, ta1 || tb1);
        accumulate(t.e12, x1, y2, ta1 || tb2);
        accumulate(t.e21, x2, y1, ta2 || tb1);
        accumulate(t.e22, x2, y2, ta2 || tb2);

        const int term = x1 * (y1 - y2) - x2 * (y2 + y1);
        t.term_sum += term;
        if (term == 2)
            ++t.term_plus2;
        else if (term == -2)
            ++t.term_minus2;
        else
            ++t.term_other;
    }
    return t;
}

void quad_terms(SpinView spins, const QuadSettings& q, std::span<std::int8_t> out) {
    const Setting a1(q.a1), a2(q.a2), b1(q.b1), b2(q.b2);
    for (std::size_t k = 0; k < spins.size(); ++k) {
        const double sx = spins.x[k], sy = spins.y[k], sz = spins.z[k];
        const int x1 = station_a_sign(a1.dot(sx, sy, sz));
        const int x2 = station_a_sign(a2.dot(sx, sy, sz));
        const int y1 = station_b_sign(b1.dot(sx, sy, sz));
        const int y2 = station_b_sign(b2.dot(sx, sy, sz));
        out[k] = static_cast<std::int8_t>(x1 * (y1 - y2) - x2 * (y2 + y1));
    }
}

}  // namespace bellsim::kernels::scalar
