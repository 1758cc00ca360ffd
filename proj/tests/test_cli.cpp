#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult run(const std::string& args) {
    const std::string cmd = std::string(HESTON_QCOST_BIN) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("heston_qcost_test_" + name);
}

}  // namespace

TEST(Cli, PriceCsv) {
    const CliResult r = run("price --instance c1 --n-steps 8 --paths 2000");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(first_line(r.out), "scheme,N,n_paths,mean,std_error,clamp_rate");
    EXPECT_NE(r.out.find("strong-euler,8,2000,"), std::string::npos);
}

TEST(Cli, PriceSeedDeterminism) {
    const std::string args = "price --instance c2 --scheme weak-euler --n-steps 8 --paths 3000 --seed 5";
    EXPECT_EQ(run(args).out, run(args).out);
    EXPECT_NE(run(args).out, run(args + "1").out);
}

TEST(Cli, ConvergeJson) {
    const CliResult r = run("converge --instance c1 --schemes weak-euler,strong-euler --n-list 2,4 --paths 1000 --format json");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("command"), "converge");
    ASSERT_EQ(j.at("rows").size(), 4u);
    EXPECT_TRUE(j.at("rows")[0].contains("deviation"));
}

TEST(Cli, ResourcesPinned) {
    const CliResult r = run("resources --instance q1 --scheme weak-euler --pin-exp 16,4 --pin-arcsin 16,4");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(first_line(r.out),
              "instance,scheme,N,t_count,t_depth,qubits,t_u1,t_u2,t_u3,t_q,n_oracle,exp_m,exp_d,arcsin_m,arcsin_d");
    EXPECT_NE(r.out.find(",7363,16,4,16,4"), std::string::npos);
}

TEST(Cli, IqaeSimToFile) {
    const auto path = temp_file("iqae.json");
    const CliResult r = run("iqae-sim --a 0.3 --eps 0.01 --delta 0.05 --trials 5 --seed 3 --format json --out " +
                      path.string());
    ASSERT_EQ(r.status, 0);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j.at("rows").size(), 5u);
    EXPECT_EQ(j.at("n_oracle"), 774);
    std::filesystem::remove(path);
}

TEST(Cli, MissingStrikeExitsOne) {
    const auto path = temp_file("bad.json");
    {
        std::ofstream out(path);
        out << R"({"model": {"r": 0.03, "rho": -0.1, "kappa": 2, "theta": 0.12, "xi": 0.3, "s0": 100, "nu0": 0.1},
                  "option": {"kind": "asian-call", "expiry": 1.0}})";
    }
    EXPECT_EQ(run("price --config " + path.string()).status, 1);
    std::filesystem::remove(path);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("price").status, 1);
    EXPECT_EQ(run("price --instance c1 --format xml").status, 1);
    EXPECT_EQ(run("price --instance nope").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
}

TEST(Cli, FixedPointOverflowExitsTwo) {
    const auto path = temp_file("overflow.json");
    {
        std::ofstream out(path);
        out << R"({"model": {"r": 0.03, "rho": -0.1, "kappa": 2, "theta": 0.12, "xi": 0.3, "s0": 100, "nu0": 0.9},
                  "option": {"kind": "asian-call", "strike": 90, "expiry": 1.0, "z_bound": 200},
                  "allow_feller_violation": true,
                  "quantum": {"weak-euler": {"n_steps": 4, "n": 12, "p": 1, "eps_sin": 1e-8,
                              "pin_exp": {"m": 2, "d": 2}, "pin_arcsin": {"m": 2, "d": 2}}}})";
    }
    EXPECT_EQ(run("fixedpoint-error --config " + path.string() + " --samples 10").status, 2);
    std::filesystem::remove(path);
}
