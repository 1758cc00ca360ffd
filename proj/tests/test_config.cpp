#include <gtest/gtest.h>

#include <string>

#include "hqc/config.hpp"

using namespace hqc;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "model": {"r": 0.03, "rho": -0.1, "kappa": 2, "theta": 0.12, "xi": 0.3, "s0": 100, "nu0": 0.1},
        "option": {"kind": "asian-call", "strike": 90, "expiry": 1.0}
    })");
}

std::string error_key(const json& j) {
    try {
        parse_run_config(j);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST(Config, Minimal) {
    const RunConfig rc = parse_run_config(minimal());
    EXPECT_EQ(rc.option.kind, OptionKind::asian_call);
    EXPECT_DOUBLE_EQ(rc.option.strike, 90);
    EXPECT_FALSE(rc.scheme);
    EXPECT_EQ(rc.n_steps, 1024u);
    EXPECT_TRUE(rc.quantum.empty());
}

TEST(Config, MissingKeysAreNamed) {
    json j = minimal();
    j["option"].erase("strike");
    EXPECT_EQ(error_key(j), "option.strike");
    j = minimal();
    j["model"].erase("xi");
    EXPECT_EQ(error_key(j), "model.xi");
    j = minimal();
    j["option"]["kind"] = "lookback";
    EXPECT_EQ(error_key(j), "option.kind");
    j = minimal();
    j["option"]["kind"] = "up-and-out-call";
    EXPECT_EQ(error_key(j), "option.barrier");
    j = minimal();
    j["sampling"] = {{"paths", -3}};
    EXPECT_EQ(error_key(j), "sampling.paths");
}

TEST(Config, FellerViolationNeedsOptIn) {
    json j = minimal();
    j["model"]["xi"] = 2.0;
    EXPECT_EQ(error_key(j).rfind("model.", 0), 0u);
    j["allow_feller_violation"] = true;
    EXPECT_NO_THROW(parse_run_config(j));
}

TEST(Config, InfiniteBarrier) {
    json j = minimal();
    j["option"]["kind"] = "up-and-out-call";
    j["option"]["barrier"] = "inf";
    EXPECT_TRUE(std::isinf(*parse_run_config(j).option.barrier));
}

TEST(Config, PresetsLoad) {
    for (int i = 1; i <= 8; ++i) {
        const RunConfig rc = load_instance("c" + std::to_string(i));
        EXPECT_EQ(rc.scheme, Scheme::strong_euler);
    }
    for (int i = 1; i <= 4; ++i) {
        const RunConfig rc = load_instance("q" + std::to_string(i));
        EXPECT_EQ(rc.quantum.size(), 2u);
        EXPECT_TRUE(rc.option.z_bound);
        EXPECT_FALSE(rc.quantum.at(Scheme::weak_euler).exp_pp);
    }
    EXPECT_THROW(load_instance("nope"), ConfigError);
}

TEST(Config, QuantumSection) {
    json j = minimal();
    j["quantum"] = json::parse(R"({
        "eps_estimate": 0.001, "delta": 0.1, "pin_exp": {"m": 16, "d": 4},
        "weak-euler": {"n_steps": 8, "n": 27, "p": 11, "eps_sin": 1e-8, "pin_arcsin": {"m": 2, "d": 3}}
    })");
    const RunConfig rc = parse_run_config(j);
    ASSERT_EQ(rc.quantum.size(), 1u);
    const AlgorithmConfig& cfg = rc.quantum.at(Scheme::weak_euler);
    EXPECT_EQ(cfg.fmt.n, 27);
    EXPECT_EQ(cfg.exp_pp->m, 16);
    EXPECT_TRUE(cfg.exp_pp->pinned);
    EXPECT_EQ(cfg.arcsin_pp->d, 3);

    j["quantum"]["strong-euler"] = {{"n_steps", 8}, {"n", 29}, {"p", 11}, {"eps_sin", 1e-9}};
    EXPECT_EQ(error_key(j), "quantum.strong-euler.eps_gauss");
}
