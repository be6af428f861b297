#include "bellsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/correlation.hpp"
#include "bellsim/database_io.hpp"
#include "bellsim/error.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/kernels.hpp"
#include "bellsim/parallel.hpp"
#include "bellsim/report.hpp"
#include "bellsim/stats.hpp"
#include "bellsim/version.hpp"
#include "text_format.hpp"

namespace bellsim::cli {
namespace {

using nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raw flag values as typed; validated into RunConfig before any work starts.
struct RawOptions {
    std::uint64_t seed = 0;
    std::int64_t n = 1'000'000;
    std::string dist = "uniform";
    std::string mode = "reuse";
    std::string policy = "fixed";
    std::string workers = "auto";
    std::string out;
    std::string format;
    std::string db_path;

    // sweep
    double start_deg = 0.0;
    double stop_deg = 180.0;
    std::int64_t steps = 181;

    // chsh
    std::string a1 = "0", a2 = "90", b1 = "135", b2 = "45";

    // search
    std::int64_t budget = 1000;
};

struct RunConfig {
    std::uint64_t seed;
    std::size_t n;
    DistributionSpec distribution;
    ChshMode mode;
    SettingPolicy policy;
    std::string policy_name;
    unsigned workers;
    std::string out;
    std::string format;
    std::optional<std::string> db_path;
};

ChshMode parse_mode(const std::string& s) {
    if (s == "reuse") return ChshMode::reuse;
    if (s == "fresh") return ChshMode::fresh;
    throw ConfigError("--mode: expected reuse or fresh, got '" + s + "'");
}

unsigned parse_workers(const std::string& s) {
    if (s == "auto") return available_workers();
    unsigned k = 0;
    if (!detail::parse_integer(std::string_view(s), k) || k < 1)
        throw ConfigError("--workers: expected a positive integer or auto, got '" + s + "'");
    return k;
}

/// Degrees in the x-z plane ("45") or an explicit vector ("0.6,0,0.8").
UnitVector parse_setting(const std::string& flag, const std::string& text) {
    if (text.find(',') != std::string::npos) {
        std::string_view rest = text;
        double c[3];
        for (int i = 0; i < 3; ++i) {
            const auto comma = rest.find(',');
            if ((i < 2) != (comma != std::string_view::npos) ||
                !detail::parse_double(rest.substr(0, comma), c[i]))
                throw ConfigError(flag + ": expected degrees or x,y,z, got '" + text + "'");
            rest = i < 2 ? rest.substr(comma + 1) : std::string_view{};
        }
        try {
            return UnitVector::normalized(c[0], c[1], c[2]);
        } catch (const ConfigError&) {
            throw ConfigError(flag + ": vector must be finite and nonzero");
        }
    }
    double deg = 0.0;
    if (!detail::parse_double(text, deg) || !std::isfinite(deg))
        throw ConfigError(flag + ": expected degrees or x,y,z, got '" + text + "'");
    return direction_at_angle(deg_to_rad(deg));
}

RunConfig validate(const RawOptions& raw, const std::string& default_format,
                   std::initializer_list<const char*> formats) {
    RunConfig c{};
    c.seed = raw.seed;
    if (raw.n < 1) throw ConfigError("--n: must be at least 1");
    c.n = static_cast<std::size_t>(raw.n);
    c.distribution = DistributionSpec::parse(raw.dist);
    c.mode = parse_mode(raw.mode);
    c.policy_name = raw.policy;
    if (raw.policy == "fixed")
        c.policy = FixedPolicy{};
    else if (raw.policy == "from-database")
        c.policy = FromDatabasePolicy{};
    else if (raw.policy == "uniform")
        c.policy = UniformPolicy{};
    else
        throw ConfigError("--policy: expected fixed, from-database or uniform, got '" + raw.policy + "'");
    c.workers = parse_workers(raw.workers);
    c.out = raw.out;
    c.format = raw.format.empty() ? default_format : raw.format;
    if (std::find(formats.begin(), formats.end(), c.format) == formats.end()) {
        std::string allowed;
        for (const char* f : formats) allowed += std::string(allowed.empty() ? "" : "|") + f;
        throw ConfigError("--format: this command writes " + allowed + ", got '" + c.format + "'");
    }
    if (!raw.db_path.empty()) c.db_path = raw.db_path;
    return c;
}

/// Streams `produce` into --out via a temporary file renamed on success,
/// or to `stdout_stream` when --out is empty.
void emit(const std::string& path, std::ostream& stdout_stream,
          const std::function<void(std::ostream&)>& produce) {
    if (path.empty()) {
        produce(stdout_stream);
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("--out: cannot write " + path);
        produce(f);
        f.flush();
        if (!f) {
            f.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("--out: write failed for " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("--out: cannot move output into place at " + path);
    }
}

ordered_json provenance(const std::string& command, const RunConfig& c) {
    ordered_json p;
    p["tool"] = "bellsim";
    p["version"] = kVersion;
    p["command"] = command;
    p["seed"] = c.seed;
    p["n"] = c.n;
    p["dist"] = c.distribution.to_string();
    p["mode"] = mode_name(c.mode);
    p["policy"] = c.policy_name;
    if (c.db_path) p["db"] = *c.db_path;
    return p;
}

TrialDatabase load_or_generate(const RunConfig& c) {
    if (c.db_path) return read_database(std::filesystem::path(*c.db_path));
    return generate_database(c.seed, c.distribution, c.n, c.workers);
}

void log_run(std::ostream& err, const RunConfig& c) {
    err << "bellsim: workers=" << c.workers << " isa=" << kernels::isa_name(kernels::active_isa())
        << '\n';
}

std::string format_value(double v) { return detail::format_g17(v); }

int cmd_sweep(const RawOptions& raw, std::ostream& out, std::ostream& err) {
    const RunConfig c = validate(raw, "csv", {"csv", "json"});
    if (raw.steps < 1) throw ConfigError("--steps: must be at least 1");
    const auto grid = theta_grid_degrees(raw.start_deg, raw.stop_deg, static_cast<std::size_t>(raw.steps));
    log_run(err, c);

    const TrialDatabase db = load_or_generate(c);
    const CorrelationCurve curve = sweep_correlation(db, grid, std::nullopt, c.workers);

    double max_linear = 0.0, max_singlet = 0.0;
    for (const auto& p : curve) {
        max_linear = std::max(max_linear, std::abs(p.estimate.value - p.linear_ref));
        max_singlet = std::max(max_singlet, std::abs(p.estimate.value - p.singlet_ref));
    }

    emit(c.out, out, [&](std::ostream& os) {
        if (c.format == "csv") {
            os << "# bellsim " << kVersion << " sweep seed=" << c.seed << " n=" << db.size()
               << " dist=" << db.distribution().to_string() << " start_deg=" << format_value(raw.start_deg)
               << " stop_deg=" << format_value(raw.stop_deg) << " steps=" << raw.steps << '\n';
            write_curve_csv(os, curve);
        } else {
            ordered_json j;
            j["provenance"] = provenance("sweep", c);
            j["points"] = report::curve_json(curve);
            j["max_abs_dev_linear"] = max_linear;
            j["max_abs_dev_singlet"] = max_singlet;
            os << j.dump(2) << '\n';
        }
    });
    std::ostream& summary = c.out.empty() ? err : out;
    summary << "sweep: " << curve.size() << " points, max |E_hat - E_linear| = " << format_value(max_linear)
            << ", max |E_hat - E_singlet| = " << format_value(max_singlet) << '\n';
    return kOk;
}

SettingQuad quad_for(const RawOptions& raw, const RunConfig& c, const TrialDatabase& db) {
    if (std::holds_alternative<FixedPolicy>(c.policy))
        return {parse_setting("--a1", raw.a1), parse_setting("--a2", raw.a2),
                parse_setting("--b1", raw.b1), parse_setting("--b2", raw.b2)};
    RandomStream stream(c.seed, StreamDomain::settings);
    const auto [a1, b1] = select_settings(c.policy, db, stream);
    const auto [a2, b2] = select_settings(c.policy, db, stream);
    return {a1, a2, b1, b2};
}

int cmd_chsh(const RawOptions& raw, std::ostream& out, std::ostream& err) {
    const RunConfig c = validate(raw, "json", {"json"});
    if (std::holds_alternative<FixedPolicy>(c.policy)) {
        parse_setting("--a1", raw.a1);
        parse_setting("--a2", raw.a2);
        parse_setting("--b1", raw.b1);
        parse_setting("--b2", raw.b2);
    }
    log_run(err, c);

    const TrialDatabase db = load_or_generate(c);
    const SettingQuad quad = quad_for(raw, c, db);
    RandomStream fresh(c.seed, StreamDomain::fresh);
    const ChshResult r = chsh_statistic(db, quad, c.mode, fresh, c.workers);

    emit(c.out, out, [&](std::ostream& os) {
        ordered_json j;
        j["provenance"] = provenance("chsh", c);
        j["seed"] = c.seed;
        j.update(report::chsh_json(r, quad));
        os << j.dump(2) << '\n';
    });
    std::ostream& summary = c.out.empty() ? err : out;
    summary << "chsh: mode=" << mode_name(r.mode) << " S = " << format_value(r.statistic)
            << " (combined SE " << format_value(r.combined_standard_error) << ")";
    if (r.per_trial_min)
        summary << ", per-trial terms in [" << *r.per_trial_min << ", " << *r.per_trial_max << "]";
    summary << '\n';
    return kOk;
}

int cmd_search(const RawOptions& raw, std::ostream& out, std::ostream& err) {
    const RunConfig c = validate(raw, "json", {"json"});
    if (raw.budget < 1) throw ConfigError("--budget: must be at least 1");
    log_run(err, c);

    const TrialDatabase db = load_or_generate(c);
    RandomStream stream(c.seed, StreamDomain::search);
    SearchOptions options;
    options.budget = raw.budget;
    options.workers = c.workers;
    const SearchResult found = search_max_chsh(db, c.mode, options, stream);
    const double s_max = found.best.statistic;
    if (c.mode == ChshMode::reuse && s_max > 2.0)
        throw InvariantError("reuse-mode search exceeded the CHSH bound: S_max = " + format_value(s_max));

    emit(c.out, out, [&](std::ostream& os) {
        ordered_json j;
        j["provenance"] = provenance("search", c);
        j["seed"] = c.seed;
        j["budget"] = raw.budget;
        j["evaluated"] = found.evaluated;
        j.update(report::chsh_json(found.best, found.quad));
        j["best_quad"] = report::quad_json(found.quad);
        if (c.mode == ChshMode::fresh) {
            j["fresh_seeds"] = {found.fresh_seeds[0], found.fresh_seeds[1], found.fresh_seeds[2]};
            const double excess = s_max - 2.0;
            j["excess_over_2"] = excess;
            if (excess > 0.0) {
                // S - 2 > excess forces some correlation off its mean by more than excess/4.
                const DeviationBound per = hoeffding_bound(found.best.n, excess / 4.0);
                j["hoeffding_per_correlation"] = report::bound_json(per);
                j["hoeffding_union"] = std::min(1.0, 4.0 * per.bound);
            }
        }
        os << j.dump(2) << '\n';
    });
    std::ostream& summary = c.out.empty() ? err : out;
    if (c.mode == ChshMode::reuse)
        summary << "bound respected: S_max = " << format_value(s_max) << " ≤ 2\n";
    else
        summary << "search: fresh mode S_max = " << format_value(s_max) << " over " << found.evaluated
                << " quads\n";
    return kOk;
}

int cmd_enumerate(std::ostream& out) {
    const StrategyTable t = enumerate_deterministic_strategies();
    out << "x1 x2 y1 y2 term\n";
    auto sgn = [](int v) { return v > 0 ? std::string("+") + std::to_string(v) : std::to_string(v); };
    for (const auto& r : t.rows)
        out << sgn(r.x1) << ' ' << sgn(r.x2) << ' ' << sgn(r.y1) << ' ' << sgn(r.y2) << ' '
            << sgn(r.term) << '\n';
    out << "max=" << sgn(t.max) << " min=" << sgn(t.min) << '\n';
    return kOk;
}

int cmd_gen_db(const RawOptions& raw, std::ostream& out, std::ostream& err) {
    const RunConfig c = validate(raw, "db", {"db"});
    log_run(err, c);
    const TrialDatabase db = generate_database(c.seed, c.distribution, c.n, c.workers);
    emit(c.out, out, [&](std::ostream& os) { write_database(os, db); });
    return kOk;
}

void add_common(CLI::App& app, RawOptions& raw, bool with_db_input) {
    app.add_option("--seed", raw.seed, "Seed (unsigned 64-bit)");
    app.add_option("--n", raw.n, "Number of trials");
    app.add_option("--dist", raw.dist,
                   "Spin distribution: uniform | fixed:X,Y,Z | cap:X,Y,Z:DEG | mix:W*SPEC+W*SPEC...");
    app.add_option("--mode", raw.mode, "reuse | fresh");
    app.add_option("--workers", raw.workers, "Worker threads, or auto");
    app.add_option("--out", raw.out, "Output file (default: standard output)");
    app.add_option("--format", raw.format, "csv | json");
    if (with_db_input) app.add_option("--db", raw.db_path, "Read the trial database from this file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo simulator for the signed spin pair experiment", "bellsim"};
    app.require_subcommand(1);
    RawOptions raw;

    auto* sweep = app.add_subcommand("sweep", "Tabulate E(theta) against the linear and singlet curves");
    add_common(*sweep, raw, true);
    sweep->add_option("--start", raw.start_deg, "First angle in degrees");
    sweep->add_option("--stop", raw.stop_deg, "Last angle in degrees");
    sweep->add_option("--steps", raw.steps, "Number of grid points");

    auto* chsh = app.add_subcommand("chsh", "Evaluate S = E11 - E12 - E22 - E21 for one quad");
    add_common(*chsh, raw, true);
    chsh->add_option("--policy", raw.policy, "fixed | from-database | uniform");
    chsh->add_option("--a1", raw.a1, "Setting a1: degrees in the x-z plane or x,y,z");
    chsh->add_option("--a2", raw.a2, "Setting a2");
    chsh->add_option("--b1", raw.b1, "Setting b1");
    chsh->add_option("--b2", raw.b2, "Setting b2");

    auto* search = app.add_subcommand("search", "Search settings for the largest S");
    add_common(*search, raw, true);
    search->add_option("--budget", raw.budget, "Number of candidate quads");

    auto* enumerate = app.add_subcommand("enumerate", "List the 16 deterministic strategies");

    auto* gendb = app.add_subcommand("gen-db", "Write a trial database in text form");
    add_common(*gendb, raw, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kConfigError;
    }

    try {
        if (*sweep) return cmd_sweep(raw, out, err);
        if (*chsh) return cmd_chsh(raw, out, err);
        if (*search) return cmd_search(raw, out, err);
        if (*enumerate) return cmd_enumerate(out);
        if (*gendb) return cmd_gen_db(raw, out, err);
    } catch (const ConfigError& e) {
        err << "bellsim: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "bellsim: " << e.what() << '\n';
        return kIoError;
    } catch (const InvariantError& e) {
        err << "bellsim: internal invariant failed: " << e.what() << '\n';
        return kInvariantError;
    }
    return kConfigError;
}

}  // namespace bellsim::cli
