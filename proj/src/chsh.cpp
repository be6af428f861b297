#include "bellsim/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bellsim/error.hpp"
#include "bellsim/parallel.hpp"

namespace bellsim {
namespace {

double combined_se(const ChshResult& r) {
    return std::sqrt(r.e11.standard_error * r.e11.standard_error +
                     r.e12.standard_error * r.e12.standard_error +
                     r.e21.standard_error * r.e21.standard_error +
                     r.e22.standard_error * r.e22.standard_error);
}

void assemble(ChshResult& r) {
    // Equal n throughout, so S is one integer over n.
    r.numerator = r.e11.numerator() - r.e12.numerator() - r.e22.numerator() - r.e21.numerator();
    r.statistic = static_cast<double>(r.numerator) / static_cast<double>(r.n);
    r.combined_standard_error = combined_se(r);
}

kernels::QuadTally tally_quad_parallel(SpinView spins, const kernels::QuadSettings& q,
                                       unsigned workers) {
    std::vector<kernels::QuadTally> partial(std::max(1u, workers));
    for_each_range(spins.size(), workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
        partial[w] = kernels::tally_quad(spins.subview(begin, end - begin), q);
    });
    kernels::QuadTally total;
    for (const auto& p : partial) total += p;
    return total;
}

ChshResult chsh_reuse(const TrialDatabase& db, const SettingQuad& quad, unsigned workers) {
    const kernels::QuadTally t = tally_quad_parallel(db.spins(), quad.settings(), workers);
    ChshResult r;
    r.mode = ChshMode::reuse;
    r.n = static_cast<std::int64_t>(db.size());
    r.e11 = CorrelationEstimate::from_tally(t.e11);
    r.e12 = CorrelationEstimate::from_tally(t.e12);
    r.e21 = CorrelationEstimate::from_tally(t.e21);
    r.e22 = CorrelationEstimate::from_tally(t.e22);
    assemble(r);
    if (t.term_other != 0 || t.term_sum != r.numerator)
        throw InvariantError("per-trial CHSH identity violated: term_sum=" +
                             std::to_string(t.term_sum) + " numerator=" + std::to_string(r.numerator) +
                             " non-(+-2) terms=" + std::to_string(t.term_other));
    r.term_sum = t.term_sum;
    r.per_trial_min = t.term_minus2 > 0 ? -2 : 2;
    r.per_trial_max = t.term_plus2 > 0 ? 2 : -2;
    return r;
}

bool better(const ChshResult& a, const SettingQuad& qa, const ChshResult& b, const SettingQuad& qb) {
    if (a.numerator != b.numerator) return a.numerator > b.numerator;
    return qa.components() < qb.components();
}

UnitVector in_plane_unit(double angle) {
    return UnitVector::normalized(std::sin(angle), 0.0, std::cos(angle));
}

UnitVector perturb(const UnitVector& v, double scale, RandomStream& stream) {
    for (;;) {
        const double x = v.x() + scale * stream.next_normal();
        const double y = v.y() + scale * stream.next_normal();
        const double z = v.z() + scale * stream.next_normal();
        if (std::sqrt(x * x + y * y + z * z) >= 1e-6) return UnitVector::normalized(x, y, z);
    }
}

}  // namespace

SettingQuad SettingQuad::in_plane(double a1, double a2, double b1, double b2) {
    return {direction_at_angle(a1), direction_at_angle(a2), direction_at_angle(b1),
            direction_at_angle(b2)};
}

SettingQuad SettingQuad::canonical() {
    return in_plane(0.0, deg_to_rad(90.0), deg_to_rad(135.0), deg_to_rad(45.0));
}

std::array<double, 12> SettingQuad::components() const noexcept {
    return {a1.x(), a1.y(), a1.z(), a2.x(), a2.y(), a2.z(),
            b1.x(), b1.y(), b1.z(), b2.x(), b2.y(), b2.z()};
}

const char* mode_name(ChshMode mode) noexcept { return mode == ChshMode::reuse ? "reuse" : "fresh"; }

ChshResult chsh_fresh(const TrialDatabase& d11, const TrialDatabase& d12, const TrialDatabase& d21,
                      const TrialDatabase& d22, const SettingQuad& quad, unsigned workers) {
    if (d12.size() != d11.size() || d21.size() != d11.size() || d22.size() != d11.size())
        throw ConfigError("fresh mode: all four databases must have the same size");
    ChshResult r;
    r.mode = ChshMode::fresh;
    r.n = static_cast<std::int64_t>(d11.size());
    r.e11 = estimate_correlation(d11, quad.a1, quad.b1, workers);
    r.e12 = estimate_correlation(d12, quad.a1, quad.b2, workers);
    r.e21 = estimate_correlation(d21, quad.a2, quad.b1, workers);
    r.e22 = estimate_correlation(d22, quad.a2, quad.b2, workers);
    assemble(r);
    return r;
}

ChshResult chsh_statistic(const TrialDatabase& db, const SettingQuad& quad, ChshMode mode,
                          RandomStream& stream, unsigned workers) {
    if (mode == ChshMode::reuse) return chsh_reuse(db, quad, workers);
    const auto& dist = db.distribution();
    const TrialDatabase d12 = generate_database(stream.next_u64(), dist, db.size(), workers);
    const TrialDatabase d21 = generate_database(stream.next_u64(), dist, db.size(), workers);
    const TrialDatabase d22 = generate_database(stream.next_u64(), dist, db.size(), workers);
    return chsh_fresh(db, d12, d21, d22, quad, workers);
}

std::vector<std::int8_t> per_trial_terms(const TrialDatabase& db, const SettingQuad& quad) {
    std::vector<std::int8_t> out(db.size());
    kernels::quad_terms(db.spins(), quad.settings(), out);
    return out;
}

StrategyTable enumerate_deterministic_strategies() {
    StrategyTable table{};
    table.max = -1000;
    table.min = 1000;
    int row = 0;
    for (int x1 : {1, -1})
        for (int x2 : {1, -1})
            for (int y1 : {1, -1})
                for (int y2 : {1, -1}) {
                    const int term = x1 * y1 - x1 * y2 - x2 * y2 - x2 * y1;
                    table.rows[row++] = {x1, x2, y1, y2, term};
                    table.max = std::max(table.max, term);
                    table.min = std::min(table.min, term);
                }
    return table;
}

SettingQuad to_standard_convention(const SettingQuad& q) { return {q.a1, -q.a2, q.b1, q.b2}; }

double standard_chsh_from(const CorrelationEstimate& e_ab, const CorrelationEstimate& e_abp,
                          const CorrelationEstimate& e_apb, const CorrelationEstimate& e_apbp) {
    return e_ab.value - e_abp.value + e_apb.value + e_apbp.value;
}

SearchResult search_max_chsh(const TrialDatabase& db, ChshMode mode, const SearchOptions& options,
                             RandomStream& stream) {
    if (options.budget < 1) throw ConfigError("budget: must be at least 1");
    const auto budget = options.budget;

    SearchResult out;
    std::optional<TrialDatabase> f12, f21, f22;
    if (mode == ChshMode::fresh) {
        for (auto& s : out.fresh_seeds) s = stream.next_u64();
        f12 = generate_database(out.fresh_seeds[0], db.distribution(), db.size(), options.workers);
        f21 = generate_database(out.fresh_seeds[1], db.distribution(), db.size(), options.workers);
        f22 = generate_database(out.fresh_seeds[2], db.distribution(), db.size(), options.workers);
    }
    auto evaluate = [&](const SettingQuad& q) {
        return mode == ChshMode::reuse ? chsh_reuse(db, q, 1) : chsh_fresh(db, *f12, *f21, *f22, q, 1);
    };

    bool have_incumbent = false;
    // Evaluates a batch (candidates in parallel, one worker per candidate)
    // and folds it into the incumbent with the order-free tie rule.
    auto run_batch = [&](const std::vector<SettingQuad>& batch) {
        std::vector<std::optional<ChshResult>> results(batch.size());
        for_each_range(batch.size(), options.workers, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) results[i] = evaluate(batch[i]);
        });
        bool improved = false;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (!have_incumbent || better(*results[i], batch[i], out.best, out.quad)) {
                improved = improved || have_incumbent;
                out.best = *results[i];
                out.quad = batch[i];
                have_incumbent = true;
            }
        }
        out.evaluated += static_cast<std::int64_t>(batch.size());
        return improved;
    };

    run_batch({options.initial.value_or(SettingQuad::canonical())});
    std::int64_t remaining = budget - 1;

    // In-plane lattice: L angles per setting over a full turn, L^4 quads.
    const std::int64_t lattice_share = remaining / 4;
    std::int64_t steps = 1;
    while ((steps + 1) * (steps + 1) * (steps + 1) * (steps + 1) <= lattice_share) ++steps;
    if (steps >= 2) {
        std::vector<SettingQuad> lattice;
        lattice.reserve(static_cast<std::size_t>(steps * steps * steps * steps));
        std::vector<UnitVector> dirs;
        for (std::int64_t i = 0; i < steps; ++i)
            dirs.push_back(in_plane_unit(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(steps)));
        for (const auto& a1 : dirs)
            for (const auto& a2 : dirs)
                for (const auto& b1 : dirs)
                    for (const auto& b2 : dirs) lattice.push_back({a1, a2, b1, b2});
        run_batch(lattice);
        remaining -= static_cast<std::int64_t>(lattice.size());
    }

    const std::int64_t random_share = remaining / 2;
    if (random_share > 0) {
        std::vector<SettingQuad> batch;
        batch.reserve(static_cast<std::size_t>(random_share));
        for (std::int64_t i = 0; i < random_share; ++i) {
            const UnitVector a1 = sample_uniform_direction(stream);
            const UnitVector a2 = sample_uniform_direction(stream);
            const UnitVector b1 = sample_uniform_direction(stream);
            const UnitVector b2 = sample_uniform_direction(stream);
            batch.push_back({a1, a2, b1, b2});
        }
        run_batch(batch);
        remaining -= random_share;
    }

    // Local refinement: Gaussian perturbations of the incumbent, shrinking
    // the scale after a batch without improvement.
    constexpr std::int64_t kBatch = 64;
    double scale = 0.2;
    while (remaining > 0) {
        const std::int64_t size = std::min(kBatch, remaining);
        std::vector<SettingQuad> batch;
        batch.reserve(static_cast<std::size_t>(size));
        for (std::int64_t i = 0; i < size; ++i) {
            const UnitVector a1 = perturb(out.quad.a1, scale, stream);
            const UnitVector a2 = perturb(out.quad.a2, scale, stream);
            const UnitVector b1 = perturb(out.quad.b1, scale, stream);
            const UnitVector b2 = perturb(out.quad.b2, scale, stream);
            batch.push_back({a1, a2, b1, b2});
        }
        if (!run_batch(batch)) scale = std::max(1e-3, scale * 0.7);
        remaining -= size;
    }
    return out;
}

}  // namespace bellsim
