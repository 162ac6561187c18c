#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "znmap/cli.hpp"

using namespace znmap;
using namespace znmap::cli;
using Catch::Matchers::WithinAbs;

namespace {

struct Captured {
    int code = 0;
    std::string out;
    std::string err;
};

Captured run_args(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Captured c;
    c.code = run(args, out, err);
    c.out = out.str();
    c.err = err.str();
    return c;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<double> split_csv(const std::string& line) {
    std::vector<double> v;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) v.push_back(std::stod(cell));
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "znmap_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("parse verify command") {
    const auto cmd = parse_command({"verify", "--family", "fn", "--n", "6", "--k", "1.1", "--suite", "all", "--json",
                                    "out.json"});
    REQUIRE(cmd);
    CHECK(cmd->subcommand == "verify");
    CHECK(cmd->family == Family::Fn);
    REQUIRE(cmd->n);
    CHECK(*cmd->n == 6);
    CHECK(cmd->k == 1.1);
    CHECK(cmd->suite == "all");
    CHECK(cmd->json == "out.json");
}

TEST_CASE("parse basin command") {
    const auto cmd = parse_command({"basin", "--family", "hn", "--n", "5", "--k", "1.1", "--window", "-5", "5", "-5",
                                    "5", "--res", "512", "--out", "b.pgm"});
    REQUIRE(cmd);
    CHECK(cmd->subcommand == "basin");
    CHECK(cmd->family == Family::Hn);
    CHECK(*cmd->n == 5);
    CHECK(cmd->window == std::vector<double>{-5.0, 5.0, -5.0, 5.0});
    CHECK(cmd->width == 512);
    CHECK(cmd->height == 512);
    CHECK(cmd->out == "b.pgm");
    CHECK(cmd->map().n() == 5);
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse_command({"eval", "--family", "f4", "--k", "1.2", "--x", "1", "--y", "0"}), UsageError);
    CHECK_THROWS_AS(parse_command({"eval", "--family", "fn", "--x", "1", "--y", "0"}), UsageError);
    CHECK_THROWS_AS(parse_command({"eval", "--family", "f4", "--n", "5", "--x", "1", "--y", "0"}), UsageError);
    CHECK_THROWS_AS(parse_command({"eval", "--family", "f4", "--beta", "0.1", "--x", "1", "--y", "0"}), UsageError);
    CHECK_THROWS_AS(parse_command({"eval", "--family", "q7", "--x", "1", "--y", "0"}), UsageError);
    CHECK_THROWS_AS(parse_command({"verify", "--suite", "nonsense"}), UsageError);
    CHECK_THROWS_AS(parse_command({"unfold-scan", "--beta", "0:0.1"}), UsageError);
    CHECK_THROWS_AS(parse_command({}), UsageError);

    const Captured c = run_args({"eval", "--family", "f4", "--k", "1.2", "--x", "1", "--y", "0"});
    CHECK(c.code == kUsage);
    CHECK(c.err.find("usage error") != std::string::npos);
    CHECK(c.out.empty());
}

TEST_CASE("parse_range") {
    const Range r = parse_range("0:0.1:11");
    CHECK(r.lo == 0.0);
    CHECK(r.hi == 0.1);
    CHECK(r.count == 11);
    const auto v = r.values();
    REQUIRE(v.size() == 11);
    CHECK_THAT(v[5], WithinAbs(0.05, 1e-17));
    CHECK(v.back() == 0.1);
    CHECK(parse_range("2:3:1").values() == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_range("1:2:0"), UsageError);
    CHECK_THROWS_AS(parse_range("a:b:c"), UsageError);
}

TEST_CASE("eval output") {
    const Captured c = run_args({"eval", "--family", "f4", "--x", "2", "--y", "0"});
    CHECK(c.code == kOk);
    const auto lines = lines_of(c.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "x,y,fx,fy,j11,j12,j21,j22");
    const auto v = split_csv(lines[1]);
    REQUIRE(v.size() == 8);
    CHECK(v[2] == 0.0);
    CHECK_THAT(v[3], WithinAbs(1.76, 1e-15));
}

TEST_CASE("rotation output") {
    const Captured c =
        run_args({"rotation", "--family", "fn", "--n", "6", "--k", "1.1", "--x0", "2", "--y0", "0", "--iters", "200"});
    CHECK(c.code == kOk);
    CHECK(c.out == "slope=0.166667 rational=1/6\n");
}

TEST_CASE("singularity output") {
    const Captured c = run_args({"singularity"});
    CHECK(c.code == kOk);
    CHECK(c.out == "rank(Q)=12 codimension=3 complement={X1, X2, N*X2}\n");
}

TEST_CASE("singularity json") {
    const auto path = scratch_dir() / "sing.json";
    const Captured c = run_args({"singularity", "--json", path.string()});
    CHECK(c.code == kOk);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["rank"] == 12);
    CHECK(j["codimension"] == 3);
    CHECK(j["Q"].size() == 13);
    CHECK(j["unfolding_directions"] == nlohmann::json::array({"X1", "X2", "N*X2"}));
}

TEST_CASE("unfold-scan continues the period-4 orbit") {
    const Captured c = run_args({"unfold-scan", "--k", "1.1", "--alpha", "0", "--delta", "0", "--beta", "0:0.1:11"});
    CHECK(c.code == kOk);
    const auto lines = lines_of(c.out);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "beta,x,y,residual,max_multiplier,minimal,converged");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto v = split_csv(lines[i]);
        REQUIRE(v.size() == 7);
        const double beta = v[0];
        CHECK_THAT(beta, WithinAbs(0.01 * static_cast<double>(i - 1), 1e-15));
        // on the axes the period-4 radius solves k r^2 / (1 + r^2) + beta = 1
        const double r = std::sqrt((1.0 - beta) / (0.1 + beta));
        CHECK_THAT(std::hypot(v[1], v[2]), WithinAbs(r, 1e-9));
        CHECK(v[3] <= 1e-12);
        CHECK(v[5] == 1.0);
        CHECK(v[6] == 1.0);
    }
}

TEST_CASE("orbit and curve CSV") {
    Captured c = run_args({"orbit", "--family", "f4", "--x0", "3.1622776601683795", "--y0", "0", "--iters", "4"});
    CHECK(c.code == kOk);
    auto lines = lines_of(c.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "step,x,y");
    const auto last = split_csv(lines[5]);
    CHECK_THAT(last[1], WithinAbs(3.16227766016837933, 1e-12));

    c = run_args({"curve", "--family", "f4", "--radius", "1", "--samples", "4"});
    lines = lines_of(c.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "theta,x,y");
    const auto first = split_csv(lines[1]);
    CHECK_THAT(first[2], WithinAbs(0.55, 1e-15));
}

TEST_CASE("basin writes PGM") {
    const auto path = scratch_dir() / "b.pgm";
    const Captured c = run_args({"basin", "--family", "f4", "--window", "-0.9", "0.9", "-0.9", "0.9", "--res", "16",
                                 "--out", path.string()});
    CHECK(c.code == kOk);
    CHECK(c.out == "converged=256 escaped=0 undecided=0\n");
    const std::string pgm = slurp(path);
    CHECK(pgm.rfind("P5\n16 16\n255\n", 0) == 0);
}

TEST_CASE("verify one suite with JSON") {
    const auto path = scratch_dir() / "v.json";
    const Captured c = run_args({"verify", "--suite", "astroid", "--json", path.string()});
    CHECK(c.code == kOk);
    CHECK(c.out.rfind("PASS astroid", 0) == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0].contains("tolerance"));
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == kDefaultSeed);
}

TEST_CASE("io errors exit with code 3") {
    const std::string bad = (scratch_dir() / "missing-dir" / "x.csv").string();
    const Captured c = run_args({"orbit", "--family", "f4", "--x0", "1", "--y0", "0", "--out", bad});
    CHECK(c.code == kIo);
    CHECK(c.err.find("cannot open") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
    const auto dir = scratch_dir();
    const std::vector<std::vector<std::string>> commands{
        {"basin", "--family", "hn", "--n", "5", "--window", "-5", "5", "-5", "5", "--res", "48", "--out", "@"},
        {"orbit", "--family", "fn", "--n", "7", "--x0", "4", "--y0", "1", "--iters", "30", "--out", "@"},
        {"curve", "--family", "fn", "--n", "5", "--samples", "50", "--out", "@"},
        {"unfold-scan", "--beta", "0:0.05:3", "--out", "@"},
    };
    int idx = 0;
    for (auto args : commands) {
        std::string contents[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto path = dir / ("rerun_" + std::to_string(idx) + "_" + std::to_string(rep));
            for (auto& a : args)
                if (a == "@" || a.find("rerun_") != std::string::npos) a = path.string();
            CHECK(run_args(args).code == kOk);
            contents[rep] = slurp(path);
        }
        CHECK_FALSE(contents[0].empty());
        CHECK(contents[0] == contents[1]);
        ++idx;
    }
}

#ifdef ZNMAP_BINARY
TEST_CASE("binary exit codes") {
    const std::string bin = ZNMAP_BINARY;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("singularity") == 0);
    CHECK(status("eval --family f4 --k 1.2 --x 1 --y 0") == 2);
    CHECK(status("frobnicate") == 2);
    CHECK(status("orbit --family f4 --x0 1 --y0 0 --out /nonexistent/dir/o.csv") == 3);
    CHECK(status("--help") == 0);
}
#endif
