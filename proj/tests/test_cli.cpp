#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "bellsim/cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using bellsim::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "bellsim_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("enumerate prints 16 rows and the bounds") {
    const auto r = invoke({"enumerate"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1 x2 y1 y2 term");
    int plus = 0, minus = 0, rows = 0;
    while (std::getline(in, line) && line.rfind("max=", 0) != 0) {
        ++rows;
        plus += line.ends_with(" +2");
        minus += line.ends_with(" -2");
    }
    CHECK(rows == 16);
    CHECK(plus == 8);
    CHECK(minus == 8);
    CHECK(line == "max=+2 min=-2");
}

TEST_CASE("sweep writes the CSV and is reproducible") {
    const auto a = scratch("sweep_a.csv"), b = scratch("sweep_b.csv");
    const auto r1 = invoke({"sweep", "--n", "10", "--seed", "7", "--out", a.string()});
    const auto r2 = invoke({"sweep", "--n", "10", "--seed", "7", "--out", b.string(), "--workers", "3"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(r1.out.find("max |E_hat - E_linear|") != std::string::npos);

    std::istringstream in(slurp(a));
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# bellsim ", 0) == 0);
    CHECK(line.find("seed=7") != std::string::npos);
    std::getline(in, line);
    CHECK(line == "theta_rad,theta_deg,E_hat,SE,count_pos,count_neg,tie_count,E_linear,E_singlet");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 181);
    CHECK_FALSE(fs::exists(fs::path(a.string() + ".tmp")));
}

TEST_CASE("sweep with a single grid point at theta = 0") {
    const auto r = invoke({"sweep", "--n", "1000", "--steps", "1", "--start", "0", "--stop", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\n0,0,-1,0,0,1000,0,-1,-1\n") != std::string::npos);
}

TEST_CASE("sweep json output") {
    const auto r = invoke({"sweep", "--n", "100", "--steps", "3", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["points"].size() == 3);
    CHECK(j["provenance"]["version"] == "1.0.0");
}

TEST_CASE("invalid configuration exits nonzero and names the field") {
    struct Bad {
        std::vector<std::string> args;
        std::string field;
    };
    const std::vector<Bad> cases = {
        {{"sweep", "--n", "0"}, "--n"},
        {{"sweep", "--steps", "0"}, "--steps"},
        {{"sweep", "--stop", "200"}, "start/stop"},
        {{"sweep", "--dist", "cone"}, "--dist"},
        {{"chsh", "--mode", "destroy"}, "--mode"},
        {{"chsh", "--workers", "0"}, "--workers"},
        {{"chsh", "--a1", "1,2"}, "--a1"},
        {{"chsh", "--b2", "0,0,0"}, "--b2"},
        {{"chsh", "--policy", "psychic"}, "--policy"},
        {{"chsh", "--format", "csv"}, "--format"},
        {{"search", "--budget", "0"}, "--budget"},
        {{"gen-db", "--format", "json"}, "--format"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.field);
        const auto r = invoke(c.args);
        CHECK(r.code == bellsim::cli::kConfigError);
        CHECK(r.err.find(c.field) != std::string::npos);
    }
    CHECK(invoke({}).code != 0);
    CHECK(invoke({"frobnicate"}).code != 0);
}

TEST_CASE("unwritable output path fails without leaving files") {
    const auto r = invoke({"sweep", "--n", "10", "--out", "/nonexistent-dir/x.csv"});
    CHECK(r.code == bellsim::cli::kIoError);
    CHECK_FALSE(fs::exists("/nonexistent-dir/x.csv.tmp"));
}

TEST_CASE("chsh summaries") {
    SUBCASE("all-equal quad") {
        const auto r = invoke({"chsh", "--n", "10000", "--a1", "30", "--a2", "30", "--b1", "30", "--b2", "30"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["statistic"].get<double>() == 2.0);
    }
    SUBCASE("canonical quad in reuse mode") {
        const auto r = invoke({"chsh", "--n", "1000000"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const double s = j["statistic"];
        CHECK(s >= 1.99);
        CHECK(s <= 2.0);
        CHECK(j["per_trial_min"].get<int>() == 2);
        CHECK(j["per_trial_max"].get<int>() == 2);
        for (const char* k : {"seed", "mode", "n", "quad", "e11", "e12", "e21", "e22"}) CHECK(j.contains(k));
        CHECK(j["e11"].contains("SE"));
        CHECK(j["e11"].contains("ties"));
    }
    SUBCASE("fresh mode has no identity fields") {
        const auto r = invoke({"chsh", "--n", "10000", "--mode", "fresh"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["mode"] == "fresh");
        CHECK(j.contains("combined_SE"));
        CHECK_FALSE(j.contains("per_trial_min"));
        CHECK_FALSE(j.contains("per_trial_max"));
    }
    SUBCASE("vector-valued settings and database policies") {
        CHECK(invoke({"chsh", "--n", "100", "--a1", "0,0,1", "--b1", "1,0,1"}).code == 0);
        CHECK(invoke({"chsh", "--n", "100", "--policy", "from-database"}).code == 0);
        CHECK(invoke({"chsh", "--n", "100", "--policy", "uniform"}).code == 0);
    }
}

TEST_CASE("search") {
    SUBCASE("reuse mode prints the bound banner") {
        const auto path = scratch("search.json");
        const auto r = invoke({"search", "--n", "2000", "--budget", "300", "--out", path.string()});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("bound respected: S_max = ", 0) == 0);
        CHECK(r.out.find(" ≤ 2") != std::string::npos);
        const auto j = nlohmann::json::parse(slurp(path));
        CHECK(j["budget"] == 300);
        CHECK(j["evaluated"] == 300);
        CHECK(j.contains("best_quad"));
        CHECK(j["statistic"].get<double>() <= 2.0);
    }
    SUBCASE("budget 1") {
        const auto r = invoke({"search", "--n", "100", "--budget", "1"});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["evaluated"] == 1);
    }
    SUBCASE("fresh mode on n = 100 reports the excess and its Hoeffding bound") {
        const auto r = invoke({"search", "--n", "100", "--budget", "1000", "--mode", "fresh"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const double s = j["statistic"];
        CHECK(s <= 2.8);
        CHECK(j.contains("excess_over_2"));
        if (s > 2.0) {
            CHECK(j.contains("hoeffding_per_correlation"));
            CHECK(j["hoeffding_per_correlation"]["t"].get<double>() == doctest::Approx((s - 2.0) / 4));
        }
    }
}

TEST_CASE("gen-db output feeds back through --db") {
    const auto db = scratch("db.txt");
    REQUIRE(invoke({"gen-db", "--n", "500", "--seed", "3", "--out", db.string()}).code == 0);
    const std::string text = slurp(db);
    CHECK(text.rfind("bellsim-db v1 seed=3 dist=uniform n=500\n", 0) == 0);

    const auto from_file = invoke({"chsh", "--db", db.string(), "--a1", "10", "--b1", "70"});
    const auto generated = invoke({"chsh", "--n", "500", "--seed", "3", "--a1", "10", "--b1", "70"});
    REQUIRE(from_file.code == 0);
    REQUIRE(generated.code == 0);
    const auto a = nlohmann::json::parse(from_file.out), b = nlohmann::json::parse(generated.out);
    CHECK(a["statistic"] == b["statistic"]);
    CHECK(a["e11"] == b["e11"]);

    CHECK(invoke({"chsh", "--db", scratch("missing.txt").string()}).code == bellsim::cli::kConfigError);
}
