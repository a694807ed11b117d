#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = POLYRES_DATA_DIR;
const std::string kTwoNode = kData + "/two_node.json";
const std::string kThreeNode = kData + "/three_node.json";

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "polyres");
    std::ostringstream out, err;
    const int code = polyres::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "polyres_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("pf with zero load returns the flat profile") {
    const Run r = cli({"pf", kThreeNode});
    REQUIRE(r.code == polyres::cli::kOk);
    const json j = json::parse(r.out);
    CHECK(j["voltage_magnitude"] == json::parse("[1.0,1.0]"));
    CHECK(j["residual"] == 0.0);
    CHECK(j["manifest"]["command"] == "pf");
    CHECK(j["manifest"]["config"].contains("tol"));
}

TEST_CASE("pf on the two-node generation case") {
    const Run r = cli({"pf", kTwoNode, "--loads", kData + "/two_node_generation.json"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const double v = j["voltage_magnitude"][0].get<double>();
    CHECK(std::abs(v * v - 1.1376) < 1e-3);
    CHECK(std::abs(j["slack_power"]["re"].get<double>() - 0.0938) < 1e-3);
}

TEST_CASE("exit codes") {
    const fs::path heavy = scratch("heavy.json");
    write(heavy, "[[5.0],[0.0],[0.0],[0.0]]");
    CHECK(cli({"pf", kTwoNode, "--loads", heavy.string()}).code == polyres::cli::kDivergence);
    CHECK(cli({"pf", kTwoNode, "--loads", kData + "/two_node_generation.json", "--pf-max-iter", "2"}).code ==
          polyres::cli::kNonConvergence);

    const fs::path bad = scratch("bad.json");
    write(bad, "{oops");
    CHECK(cli({"pf", bad.string()}).code == polyres::cli::kInputError);
    const fs::path wrong_size = scratch("wrong_size.json");
    write(wrong_size, "[[0.0,0.0],[0.0],[0.0],[0.0]]");
    CHECK(cli({"pf", kTwoNode, "--loads", wrong_size.string()}).code == polyres::cli::kInputError);

    // Stale center: flat voltages with a nonzero load.
    const fs::path stale = scratch("stale.json");
    write(stale, R"({"v":[{"re":1,"im":0}],"s":[[0.0],[0.0],[0.1],[0.01]]})");
    CHECK(cli({"restrict", kTwoNode, "--center", stale.string()}).code == polyres::cli::kInvalidCenter);
    CHECK(cli({"seqopt", kTwoNode, "--center", stale.string()}).code == polyres::cli::kInvalidCenter);

    // Usage errors come from the argument parser.
    CHECK(cli({"restrict", kTwoNode, "--delta", "1.5"}).code >= 100);
    CHECK(cli({"restrict", kTwoNode, "--delta", "0"}).code >= 100);
    CHECK(cli({"pf", "/nonexistent.json"}).code >= 100);
    CHECK(cli({}).code >= 100);
    CHECK(cli({"--version"}).code == 0);
}

TEST_CASE("restrict output parses back") {
    const fs::path out = scratch("restriction.json");
    REQUIRE(cli({"restrict", kThreeNode, "--delta", "0.1", "--out", out.string()}).code == 0);
    std::ifstream in(out);
    const json j = json::parse(in);
    REQUIRE(j["rhs"].size() == 8);
    for (const auto& v : j["rhs"]) CHECK(std::abs(v.get<double>() - 0.081) < 1e-15);
    CHECK(j["lhs"].size() == 8);
    CHECK(j["manifest"]["config"]["delta"] == 0.1);
}

TEST_CASE("seqopt runs") {
    SUBCASE("three-node maximization converges") {
        const Run r = cli({"seqopt", kThreeNode});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["termination"] == "converged");
        CHECK(j["final_objective"].get<double>() > 8.0);
        CHECK(r.err.find("termination: converged") != std::string::npos);
    }
    SUBCASE("iteration limit zero echoes the initial point") {
        const Run r = cli({"seqopt", kThreeNode, "--max-iter", "0"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["iterates"].size() == 1);
        CHECK(j["final_objective"] == 0.0);
    }
    SUBCASE("pinned two-node bounds leave the first restriction empty") {
        const fs::path bounds = scratch("pinned.json");
        write(bounds, R"({"lower":[[0.0],[0.0],[0.1],[0.01]],"upper":[[0.0],[0.0],[0.1],[0.01]]})");
        const Run r = cli({"seqopt", kTwoNode, "--bounds", bounds.string(), "--delta0", "0.05"});
        CHECK(r.code == polyres::cli::kLpInfeasible);
        CHECK(json::parse(r.out)["termination"] == "lp_infeasible");
    }
}

TEST_CASE("region writes samples, polygon and restriction samples") {
    const fs::path out = scratch("region.csv");
    const Run r = cli({"region", kThreeNode, "--slice", "p1,p2", "--range", "-5,5", "--grid", "21", "--pf", "0.9",
                       "--p-samples", "50", "--out", out.string()});
    REQUIRE(r.code == 0);

    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = lines(ss.str());
    REQUIRE(rows.size() == 2 + 21 * 21);
    CHECK(rows[0].rfind("# manifest: ", 0) == 0);
    CHECK(json::parse(rows[0].substr(12))["command"] == "region");
    CHECK(rows[1] == "p1,p2,verdict,vmag1,vmag2");

    std::ifstream pin(scratch("region_polygon.csv"));
    std::stringstream ps;
    ps << pin.rdbuf();
    const auto poly = lines(ps.str());
    CHECK(poly.size() >= 2 + 3);
    CHECK(poly[1] == "u0,u1");

    std::ifstream sin(scratch("region_psamples.csv"));
    std::stringstream sp;
    sp << sin.rdbuf();
    const auto samples = lines(sp.str());
    CHECK(samples.size() == 2 + 50);
    for (std::size_t i = 2; i < samples.size(); ++i) CHECK(samples[i].find(",in_s") != std::string::npos);
}

TEST_CASE("region single point and one axis") {
    const Run r = cli({"region", kThreeNode, "--slice", "q2", "--range", "0,0", "--grid", "1"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2] == "0,in_s,1,1");
    CHECK(cli({"region", kThreeNode, "--slice", "p7"}).code == polyres::cli::kInputError);
    CHECK(cli({"region", kThreeNode, "--slice", "p1,p1"}).code == polyres::cli::kInputError);
    CHECK(cli({"region", kThreeNode, "--range", "5,-5"}).code == polyres::cli::kInputError);
}

TEST_CASE("two-node oracle output") {
    const Run r = cli({"oracle", "two-node"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["solutions"].size() == 2);
    CHECK(std::abs(j["solutions"][0]["v1_sq"].get<double>() - 1.1376) < 5e-4);
    REQUIRE(j["current_box"].size() == 2);
    CHECK(std::abs(j["current_box"][1]["p0_relaxed"].get<double>() + 0.0447) < 5e-4);
}

TEST_CASE("brute-force oracle on a coarse grid") {
    const Run r = cli({"oracle", "optimum", kThreeNode, "--grid", "20"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["effective_dimension"] == 2);
    CHECK(j["value"].get<double>() > 8.0);
}
