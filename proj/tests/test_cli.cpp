#include "cli_support.hpp"

#include "cqleak/io.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cqleak;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
    int status;
    std::string out;
};

// CQLEAK_BIN overrides the binary built alongside this test.
std::string binary() {
    const char* bin = std::getenv("CQLEAK_BIN");
    return bin != nullptr ? bin : CQLEAK_DEFAULT_BIN;
}

Run run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "cqleak_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("angle parsing") {
    CHECK_THAT(cli::parse_angle("2.5pi"), WithinAbs(2.5 * kPi, 1e-15));
    CHECK_THAT(cli::parse_angle("pi/2"), WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(cli::parse_angle("-pi/2"), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(cli::parse_angle("3pi/2"), WithinAbs(1.5 * kPi, 1e-15));
    CHECK_THAT(cli::parse_angle("0.5*pi"), WithinAbs(0.5 * kPi, 1e-15));
    CHECK_THAT(cli::parse_angle("pi"), WithinAbs(kPi, 0.0));
    CHECK_THAT(cli::parse_angle("1.25"), WithinAbs(1.25, 0.0));
    CHECK_THAT(cli::parse_angle(" 2 pi "), WithinAbs(2 * kPi, 1e-15));
    CHECK_THROWS_AS(cli::parse_angle(""), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_angle("pix"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_angle("2pi/0"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_angle("abc"), std::invalid_argument);
}

TEST_CASE("list parsing and output resolution") {
    CHECK(cli::parse_list("0.1, 0.2,0.3") == std::vector<double>{0.1, 0.2, 0.3});
    CHECK_THROWS_AS(cli::parse_list(""), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_list("0.1,,0.2"), std::invalid_argument);
    CHECK(cli::resolve_output("x.csv", "d.csv") == std::filesystem::path("x.csv"));
    setenv("CQLEAK_OUT_DIR", "/tmp/somewhere", 1);
    CHECK(cli::resolve_output("", "d.csv") == std::filesystem::path("/tmp/somewhere/d.csv"));
    unsetenv("CQLEAK_OUT_DIR");
    CHECK(cli::resolve_output("", "d.csv").empty());
}

TEST_CASE("gate command") {
    SECTION("noise-free composite rotation is exact") {
        const auto r = run("gate rzxz --theta 2.5pi --phi 2pi --noise 0");
        REQUIRE(r.status == 0);
        const auto j = io::Json::parse(r.out);
        CHECK_THAT(j["fidelity"].get<double>(), WithinAbs(1.0, 1e-12));
        CHECK(j["meta"]["config"]["theta"] == "2.5pi");
        CHECK(j["checks"]["unitarity"] == true);
    }
    SECTION("identity sequence against its closed forms") {
        const auto r = run("gate identity --eps-q 1 --g 3 --noise-ratio 1e-3");
        REQUIRE(r.status == 0);
        const auto j = io::Json::parse(r.out);
        const double p_lc = j["p_lc"].get<double>();
        const double cf = j["params"]["closed_form_p_lc"].get<double>();
        CHECK(std::abs(p_lc - cf) < 0.1 * cf);
    }
    SECTION("usage errors") {
        CHECK(run("gate rzxz --theta 1.5pi").status != 0);
        CHECK(run("gate hadamard").status != 0);
        CHECK(run("gate rzxz --optimize").status != 0);
        CHECK(run("").status != 0);
    }
}

TEST_CASE("data commands write self-describing files") {
    const auto dir = scratch_dir();
    SECTION("levels") {
        const auto path = dir / "levels.csv";
        REQUIRE(run("levels --axis g --eps-q 0 --xi 0.3 --n 11 --out " + path.string()).status == 0);
        std::ifstream f(path);
        const auto meta = io::read_metadata(f);
        CHECK(meta["command"] == "levels");
        CHECK(meta["config"]["xi"] == 0.3);
        std::string header;
        std::getline(f, header);
        CHECK(header == "param,E1,E2,E3");
    }
    SECTION("environment variable picks the directory") {
        const auto sub = dir / "env";
        std::filesystem::remove_all(sub);
        const std::string cmd = "CQLEAK_OUT_DIR=" + sub.string() + " " + binary() +
                                " nogo --n-theta 16 --n-phi 16 --n-ratio 9 --n-refine 4 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        CHECK(std::filesystem::exists(sub / "nogo.csv"));
    }
    SECTION("scaling slopes") {
        const auto r = run("scaling --sequence rzxz --theta 3pi --phi 2pi");
        REQUIRE(r.status == 0);
        const auto j = io::Json::parse(r.out);
        CHECK(j["slope_comp"].get<double>() > 3.8);
        CHECK(j["slope_comp"].get<double>() < 4.2);
        CHECK(j["slope_leak"].get<double>() > 5.8);
        CHECK(j["slope_leak"].get<double>() < 6.2);
        const auto bare = io::Json::parse(run("scaling --sequence bare --theta 2pi").out);
        CHECK(bare["slope_leak"].get<double>() > 1.9);
        CHECK(bare["slope_leak"].get<double>() < 2.1);
    }
    SECTION("trajectory of an analytic schedule") {
        const auto path = dir / "traj.csv";
        const auto sched = dir / "sched.csv";
        REQUIRE(run("trajectory --source rzxz --noise 0.1 --dt 1e-3 --out " + path.string() +
                    " --schedule-out " + sched.string())
                    .status == 0);
        std::ifstream f(path);
        const auto meta = io::read_metadata(f);
        CHECK(meta["checks"]["normalization"] == true);
        std::string header;
        std::getline(f, header);
        CHECK(header == "t,chi,varrho,vartheta,varsigma,p_leak");
        CHECK(std::filesystem::exists(sched));
    }
    SECTION("schedule JSON feeds back into the trajectory command") {
        const auto json = dir / "gate_sched.json";
        REQUIRE(run("gate rzxz --mode smooth --schedule-out " + json.string()).status == 0);
        REQUIRE(run("trajectory --source file --schedule " + json.string() + " --dt 1e-3 --out " +
                    (dir / "from_file.csv").string())
                    .status == 0);
    }
    SECTION("empty sweep grid is a usage error") {
        CHECK(run("sweep --grid ''").status == 2);
        CHECK(run("sweep --grid 0.3,0.1").status == 2);
    }
}
