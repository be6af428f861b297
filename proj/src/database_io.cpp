#include "bellsim/database_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bellsim/error.hpp"
#include "text_format.hpp"

namespace bellsim {
namespace {

constexpr std::string_view kMagic = "bellsim-db v1 ";

[[noreturn]] void bad_file(std::size_t line, const std::string& why) {
    throw ConfigError("database line " + std::to_string(line) + ": " + why);
}

std::string_view field_value(std::string_view header, std::string_view key, std::size_t line) {
    const auto pos = header.find(key);
    if (pos == std::string_view::npos) bad_file(line, "missing " + std::string(key));
    auto rest = header.substr(pos + key.size());
    return rest.substr(0, rest.find(' '));
}

}  // namespace

void write_database(std::ostream& out, const TrialDatabase& db) {
    out << kMagic << "seed=" << db.seed() << " dist=" << db.distribution().to_string()
        << " n=" << db.size() << '\n';
    const SpinView s = db.spins();
    std::string line;
    for (std::size_t k = 0; k < s.size(); ++k) {
        line = std::to_string(k);
        line += ' ';
        line += detail::format_g17(s.x[k]);
        line += ' ';
        line += detail::format_g17(s.y[k]);
        line += ' ';
        line += detail::format_g17(s.z[k]);
        line += '\n';
        out << line;
    }
}

TrialDatabase read_database(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || !header.starts_with(kMagic))
        bad_file(1, "expected header 'bellsim-db v1 seed=<u64> dist=<tag> n=<count>'");

    std::uint64_t seed = 0;
    std::size_t n = 0;
    if (!detail::parse_integer(field_value(header, " seed=", 1), seed)) bad_file(1, "bad seed");
    if (!detail::parse_integer(field_value(header, " n=", 1), n) || n == 0) bad_file(1, "bad n");
    const DistributionSpec dist = DistributionSpec::parse(field_value(header, " dist=", 1));

    std::vector<double> x, y, z;
    x.reserve(n);
    y.reserve(n);
    z.reserve(n);
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string_view rest = line;
        std::string_view parts[4];
        for (int i = 0; i < 4; ++i) {
            const auto sp = rest.find(' ');
            parts[i] = rest.substr(0, sp);
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
        }
        std::size_t k = 0;
        double c[3];
        if (!rest.empty() || !detail::parse_integer(parts[0], k) ||
            !detail::parse_double(parts[1], c[0]) || !detail::parse_double(parts[2], c[1]) ||
            !detail::parse_double(parts[3], c[2]))
            bad_file(lineno, "expected 'k x y z'");
        if (k != x.size()) bad_file(lineno, "trial index out of sequence");
        if (x.size() == n) bad_file(lineno, "more trials than the header's n");
        x.push_back(c[0]);
        y.push_back(c[1]);
        z.push_back(c[2]);
    }
    if (x.size() != n) bad_file(lineno, "fewer trials than the header's n");
    return TrialDatabase(seed, dist, std::move(x), std::move(y), std::move(z));
}

TrialDatabase read_database(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open database file " + path.string());
    return read_database(in);
}

}  // namespace bellsim
