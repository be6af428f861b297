#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bellsim/correlation.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/random.hpp"

namespace bellsim {

struct SettingQuad {
    UnitVector a1, a2, b1, b2;

    /// All four in the x-z plane, angles in radians from +z.
    static SettingQuad in_plane(double a1, double a2, double b1, double b2);

    /// a1 = 0, a2 = 90, b1 = 135, b2 = 45 degrees: saturates the linear law.
    static SettingQuad canonical();

    kernels::QuadSettings settings() const noexcept { return {a1, a2, b1, b2}; }

    /// Lexicographic order on the twelve components.
    std::array<double, 12> components() const noexcept;
};

enum class ChshMode { reuse, fresh };

const char* mode_name(ChshMode mode) noexcept;

// S = E11 - E12 - E22 - E21. For equal n the statistic is the integer
// combination of tallies divided once by n.
struct ChshResult {
    ChshMode mode = ChshMode::reuse;
    std::int64_t n = 0;
    CorrelationEstimate e11, e12, e21, e22;
    std::int64_t numerator = 0;
    double statistic = 0.0;
    double combined_standard_error = 0.0;  // sqrt of the summed squared SEs

    // Reuse mode only.
    std::optional<int> per_trial_min;
    std::optional<int> per_trial_max;
    std::optional<std::int64_t> term_sum;
};

/// In reuse mode all four correlations come from db. In fresh mode E11 uses
/// db and E12, E21, E22 each use a new database of the same size and
/// distribution whose seed is drawn from `stream`.
ChshResult chsh_statistic(const TrialDatabase& db, const SettingQuad& quad, ChshMode mode,
                          RandomStream& stream, unsigned workers = 1);

/// Fresh mode against pre-built databases (used by the search).
ChshResult chsh_fresh(const TrialDatabase& d11, const TrialDatabase& d12,
                      const TrialDatabase& d21, const TrialDatabase& d22,
                      const SettingQuad& quad, unsigned workers = 1);

/// Per-trial terms x1(y1 - y2) - x2(y2 + y1); each is -2 or +2.
std::vector<std::int8_t> per_trial_terms(const TrialDatabase& db, const SettingQuad& quad);

struct StrategyRow {
    int x1, x2, y1, y2, term;
};

struct StrategyTable {
    int max;
    int min;
    std::array<StrategyRow, 16> rows;
};

/// All 16 assignments of +-1 to (x1, x2, y1, y2) with term x1 y1 - x1 y2 - x2 y2 - x2 y1.
StrategyTable enumerate_deterministic_strategies();

/// Textbook CHSH form E(a,b) - E(a,b') + E(a',b) + E(a',b') for reference
/// code that uses it. With (a, a', b, b') = to_standard_convention(q), its
/// value equals our S on q whenever no trial hits the tie rule.
SettingQuad to_standard_convention(const SettingQuad& quad);

double standard_chsh_from(const CorrelationEstimate& e_ab, const CorrelationEstimate& e_abp,
                          const CorrelationEstimate& e_apb, const CorrelationEstimate& e_apbp);

/// Combination E11 - E12 - E22 - E21 of an arbitrary correlation function.
template <typename Fn>
double chsh_combination(Fn&& correlation, const SettingQuad& q) {
    return correlation(q.a1, q.b1) - correlation(q.a1, q.b2) - correlation(q.a2, q.b2) -
           correlation(q.a2, q.b1);
}

struct SearchOptions {
    std::int64_t budget = 1000;
    std::optional<SettingQuad> initial;  // first candidate; canonical() if unset
    unsigned workers = 1;
};

struct SearchResult {
    ChshResult best;
    SettingQuad quad = SettingQuad::canonical();
    std::int64_t evaluated = 0;
    std::uint64_t fresh_seeds[3] = {0, 0, 0};  // fresh mode only
};

/// Derivative-free maximization of S over `budget` candidate quads: the
/// initial quad, a lattice over in-plane angles, uniformly random quads,
/// then local refinement around the incumbent. Ties on S go to the
/// lexicographically smaller quad, so the result does not depend on
/// evaluation order or worker count.
SearchResult search_max_chsh(const TrialDatabase& db, ChshMode mode, const SearchOptions& options,
                             RandomStream& stream);

}  // namespace bellsim
