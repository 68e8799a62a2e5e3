#include "frog/cli.hpp"

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace frog;
namespace fs = std::filesystem;

namespace {

std::string model(const char* name) { return std::string(FROG_MODELS_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& tag) {
    const fs::path d = fs::temp_directory_path() / ("frogsim_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_frogsim(const std::string& args, const fs::path& err_file) {
    const std::string cmd = std::string("\"") + FROGSIM_PATH + "\" " + args + " > /dev/null 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, sep);) out.push_back(f);
    return out;
}

// Local verdict of the power-law phase map, written out from the two iff statements.
std::string expected_local(const std::string& side, double a, const std::string& beta) {
    if (beta == "inf") {
        if (side == "left") return "SurvivesWP";
        return a >= 1.0 ? "SurvivesAS" : "Dies";
    }
    const double b = std::stod(beta);
    const bool survives = side == "left" ? b >= std::min(2.0, 1.0 + a) : (b >= 2.0 && a >= 1.0);
    return survives ? "SurvivesWP" : "Dies";
}

} // namespace

TEST_CASE("classify exit codes and citations", "[cli][classify]") {
    std::ostringstream out;
    CHECK(cli::cmd_classify(model("right_power_alpha2.json"), "", out) == cli::kExitDecisive);
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("SurvivesAS"));
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("Example 2.6"));

    out.str("");
    CHECK(cli::cmd_classify(model("left_constant_060.json"), "", out) == cli::kExitDecisive);
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("Dies"));
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("Proposition 2.10"));

    out.str("");
    CHECK(cli::cmd_classify(model("table_no_tail.json"), "", out) == cli::kExitInconclusive);
}

TEST_CASE("classify writes a verdict record", "[cli][classify]") {
    const auto dir = scratch("json");
    std::ostringstream out;
    cli::cmd_classify(model("mortal_power_a2_b3.json"), (dir / "v.json").string(), out);
    const auto j = nlohmann::json::parse(slurp(dir / "v.json"));
    CHECK(j.contains("local"));
    CHECK(j.contains("citations"));
}

TEST_CASE("frogsim exit status through the executable", "[cli][process]") {
    const auto dir = scratch("proc");
    const auto err = dir / "stderr.txt";
    CHECK(run_frogsim("classify \"" + model("right_power_alpha2.json") + "\"", err) == 0);
    CHECK(run_frogsim("classify \"" + model("table_no_tail.json") + "\"", err) == 2);

    {
        std::ofstream bad(dir / "bad.json");
        bad << "{\n  \"schema\": \"frog-model/1\",\n  \"drift\": {\"kind\": \"constant\", \"value\": 1.7}\n}\n";
    }
    CHECK(run_frogsim("classify \"" + (dir / "bad.json").string() + "\"", err) == 1);
    CHECK_THAT(slurp(err), Catch::Matchers::ContainsSubstring("drift"));

    {
        std::ofstream broken(dir / "broken.json");
        broken << "{\n  \"drift\": \n";
    }
    CHECK(run_frogsim("classify \"" + (dir / "broken.json").string() + "\"", err) == 1);
    CHECK(run_frogsim("classify", err) == 1);
    CHECK(run_frogsim("no-such-command", err) == 1);
}

TEST_CASE("simulate is byte-identical for a fixed seed", "[cli][simulate]") {
    const auto dir = scratch("sim");
    SimConfig cfg;
    cfg.site_horizon = 20;
    cfg.time_horizon = 400;
    cfg.replications = 200;
    cfg.rng_seed = 17;
    cfg.record_trajectory = true;
    std::ostringstream out;
    REQUIRE(cli::cmd_simulate(model("staircase_cubes.json"), cfg, (dir / "a").string(), out) == 0);
    REQUIRE(cli::cmd_simulate(model("staircase_cubes.json"), cfg, (dir / "b").string(), out) == 0);
    for (const char* suffix : {"_trials.csv", "_sites.csv", "_front.csv", "_report.json"}) {
        INFO(suffix);
        const auto a = slurp(dir / (std::string("a") + suffix));
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(dir / (std::string("b") + suffix)));
    }
    CHECK(slurp(dir / "a_trials.csv").rfind("# schema: frog-trials/1\n", 0) == 0);

    // The front trace of the staircase run never moves left.
    std::istringstream front(slurp(dir / "a_front.csv"));
    std::string line;
    std::getline(front, line);
    std::getline(front, line);
    long prev = -1;
    while (std::getline(front, line)) {
        const long x = std::stol(split(line, ',').at(1));
        CHECK(x >= prev);
        prev = x;
    }
}

TEST_CASE("sites file carries the (9/11)^n column", "[cli][simulate]") {
    const auto dir = scratch("sites");
    SimConfig cfg;
    cfg.site_horizon = 6;
    cfg.time_horizon = 3000;
    cfg.replications = 4000;
    std::ostringstream out;
    REQUIRE(cli::cmd_simulate(model("right_constant_045.json"), cfg, (dir / "s").string(), out) == 0);
    std::istringstream in(slurp(dir / "s_sites.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema: frog-site-visits/1");
    std::getline(in, line);
    CHECK(line == "site,activations,visits,frequency,std_error,analytic");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto f = split(line, ',');
        REQUIRE(f.size() == 6);
        const double n = std::stod(f[0]);
        const double analytic = std::stod(f[5]);
        INFO("site " << n);
        CHECK(analytic == Catch::Approx(std::pow(9.0 / 11.0, n)).epsilon(1e-9));
        CHECK(std::abs(std::stod(f[3]) - analytic) <= 4.0 * std::stod(f[4]) + 1e-12);
        ++rows;
    }
    CHECK(rows == 6);
}

TEST_CASE("default phase grids match the golden files", "[cli][phase][golden]") {
    for (auto side : {DriftSide::Left, DriftSide::Right}) {
        const std::string name = cli::side_name(side);
        cli::SweepOptions o;
        o.side = side;
        const std::string golden = slurp(fs::path(FROG_TEST_DATA_DIR) / ("phase_grid_" + name + ".csv"));
        REQUIRE_FALSE(golden.empty());
        CHECK(cli::phase_grid_csv(o) == golden);

        std::istringstream in(golden);
        std::string line;
        std::getline(in, line);
        CHECK(line == "# schema: frog-phase-grid/1");
        std::getline(in, line);
        std::size_t finite = 0, infinite = 0;
        bool saw_corner = false;
        while (std::getline(in, line)) {
            const auto f = split(line, ',');
            REQUIRE(f.size() >= 5);
            INFO(line);
            CHECK(f[0] == name);
            const double a = std::stod(f[1]);
            CHECK(f[3] == expected_local(name, a, f[2]));
            if (f[2] == "inf") {
                ++infinite;
                CHECK(f[4] == "Trivial");
            } else {
                ++finite;
                CHECK(f[4] == "Survives");
                saw_corner = saw_corner || (a == 1.0 && f[2] == "2");
            }
        }
        CHECK(finite == 144);
        CHECK(infinite == 12);
        CHECK(saw_corner);
    }
}

TEST_CASE("sweep-phase through the executable reproduces the golden file", "[cli][phase][process]") {
    const auto dir = scratch("sweep");
    const auto err = dir / "stderr.txt";
    const auto csv = dir / "grid.csv";
    REQUIRE(run_frogsim("sweep-phase --side right --out \"" + csv.string() + "\"", err) == 0);
    CHECK(slurp(csv) == slurp(fs::path(FROG_TEST_DATA_DIR) / "phase_grid_right.csv"));
}

TEST_CASE("grid axis covers the closed range", "[cli][phase]") {
    const auto ax = cli::grid_axis(0.25, 3.0, 0.25);
    REQUIRE(ax.size() == 12);
    CHECK(ax.front() == 0.25);
    CHECK(ax.back() == 3.0);
}

TEST_CASE("oracle-check passes, catches a mutated radicand, and accepts an empty grid", "[cli][oracle]") {
    std::ostringstream out;
    CHECK(cli::cmd_oracle_check({}, out) == cli::kExitDecisive);
    CHECK_THAT(out.str(), !Catch::Matchers::ContainsSubstring("FAIL"));

    cli::OracleCheckOptions mutated;
    mutated.mutate_radicand = true;
    out.str("");
    CHECK(cli::cmd_oracle_check(mutated, out) == cli::kExitError);
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("FAIL dp"));

    cli::OracleCheckOptions empty;
    empty.empty_grid = true;
    out.str("");
    CHECK(cli::cmd_oracle_check(empty, out) == cli::kExitDecisive);
    CHECK_THAT(out.str(), Catch::Matchers::ContainsSubstring("0/0 checks passed"));
}
