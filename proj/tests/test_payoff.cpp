#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hqc/payoff.hpp"
#include "hqc/pricer.hpp"
#include "hqc/rng.hpp"

using namespace hqc;

namespace {

OptionSpec spec(OptionKind k, double strike, std::optional<double> barrier = std::nullopt,
                std::optional<double> z = std::nullopt) {
    OptionSpec s;
    s.kind = k;
    s.strike = strike;
    s.barrier = barrier;
    s.z_bound = z;
    return s;
}

}  // namespace

TEST(RawPayoff, AsianExcludesInitialPrice) {
    const std::vector<double> prices{100, 110, 120};
    EXPECT_DOUBLE_EQ(raw_payoff(spec(OptionKind::asian_call, 90), prices), 25.0);
    EXPECT_DOUBLE_EQ(raw_payoff(spec(OptionKind::asian_put, 90), prices), 0.0);
    EXPECT_THROW(raw_payoff(spec(OptionKind::asian_call, 90), std::vector<double>{100}), std::invalid_argument);
}

TEST(RawPayoff, UpAndOutCall) {
    const auto s = spec(OptionKind::up_and_out_call, 90, 130);
    EXPECT_DOUBLE_EQ(raw_payoff(s, std::vector<double>{100, 120, 110}), 20.0);
    EXPECT_DOUBLE_EQ(raw_payoff(s, std::vector<double>{100, 135, 110}), 0.0);
    EXPECT_DOUBLE_EQ(raw_payoff(s, std::vector<double>{100, 130, 110}), 20.0);  // inclusive
}

TEST(RawPayoff, InOutParity) {
    CounterRng rng(4, 0);
    const std::pair<OptionKind, OptionKind> pairs[] = {
        {OptionKind::up_and_in_call, OptionKind::up_and_out_call},
        {OptionKind::down_and_in_call, OptionKind::down_and_out_call},
        {OptionKind::up_and_in_put, OptionKind::up_and_out_put},
        {OptionKind::down_and_in_put, OptionKind::down_and_out_put}};
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> prices{100};
        for (int j = 0; j < 8; ++j) prices.push_back(prices.back() * std::exp(0.1 * (rng.uniform() - 0.5)));
        const double barrier = 90 + 20 * rng.uniform();
        for (auto [in, out] : pairs) {
            const double vanilla = is_call(in) ? std::max(prices.back() - 100, 0.0) : std::max(100 - prices.back(), 0.0);
            // Ties count for both legs, so parity is checked off the grid.
            bool tie = false;
            for (double p : prices) tie |= p == barrier;
            if (tie) continue;
            EXPECT_NEAR(raw_payoff(spec(in, 100, barrier), prices) + raw_payoff(spec(out, 100, barrier), prices),
                        vanilla, 1e-12);
        }
    }
}

TEST(RawPayoff, AsianPermutationInvariantBarrierNot) {
    const std::vector<double> a{100, 90, 140, 110};
    const std::vector<double> b{100, 140, 110, 90};
    EXPECT_DOUBLE_EQ(raw_payoff(spec(OptionKind::asian_call, 100), a), raw_payoff(spec(OptionKind::asian_call, 100), b));
    const auto s = spec(OptionKind::up_and_out_call, 95, 150);
    EXPECT_NE(raw_payoff(s, std::vector<double>{100, 90, 140, 110}), raw_payoff(s, std::vector<double>{100, 90, 110, 140}));
}

TEST(NormalizedPayoff, ConstantPath) {
    const std::vector<double> zeros(5, 0.0);
    EXPECT_NEAR(normalized_logreturn_payoff(spec(OptionKind::asian_call, 90, std::nullopt, 200), 100, zeros), 0.05,
                1e-15);
    EXPECT_EQ(normalized_logreturn_payoff(spec(OptionKind::asian_put, 90, std::nullopt, 200), 100, zeros), 0.0);
}

TEST(NormalizedPayoff, MatchesRawOverZAndStaysInUnitInterval) {
    CounterRng rng(8, 0);
    for (OptionKind k : kAllOptionKinds) {
        const auto s = spec(k, 100, is_asian(k) ? std::nullopt : std::optional<double>(105), 60);
        for (int t = 0; t < 500; ++t) {
            std::vector<double> r{0.0}, prices{100};
            for (int j = 0; j < 6; ++j) {
                r.push_back(r.back() + 0.2 * (rng.uniform() - 0.5));
                prices.push_back(100 * std::exp(r.back()));
            }
            std::uint64_t clips = 0;
            const double f = normalized_logreturn_payoff(s, 100, r, &clips);
            EXPECT_GE(f, 0.0);
            EXPECT_LE(f, 1.0);
            if (clips == 0) {
                EXPECT_NEAR(f, raw_payoff(s, prices) / 60, 1e-12) << option_kind_name(k);
            }
        }
    }
}

TEST(NormalizedPayoff, ClipsAboveOne) {
    std::uint64_t clips = 0;
    const std::vector<double> r{0.0, 1.0};
    EXPECT_EQ(normalized_logreturn_payoff(spec(OptionKind::asian_call, 10, std::nullopt, 50), 100, r, &clips), 1.0);
    EXPECT_EQ(clips, 1u);
}

TEST(OptionSpec, Validation) {
    EXPECT_THROW(spec(OptionKind::asian_call, 0).validate(), std::invalid_argument);
    EXPECT_THROW(spec(OptionKind::up_and_in_call, 90).validate(), std::invalid_argument);
    EXPECT_THROW(spec(OptionKind::asian_call, 90, 120.0).validate(), std::invalid_argument);
    EXPECT_NO_THROW(spec(OptionKind::up_and_out_call, 90, std::numeric_limits<double>::infinity()).validate());
    for (OptionKind k : kAllOptionKinds) EXPECT_EQ(parse_option_kind(option_kind_name(k)), k);
}

TEST(EstimateZ, BundledAsianCallBoundIsCompatible) {
    const HestonParams p{0.03, -0.1, 2.0, 0.12, 0.3, 100.0, 0.1};
    auto s = spec(OptionKind::asian_call, 90);
    s.expiry = 1.0;
    const auto z = estimate_z(s, p, Scheme::weak_euler, TimeGrid{1.0, 64}, 20000, 3);
    EXPECT_FALSE(z.degenerate);
    EXPECT_GT(z.z, z.max_payoff - 1e-12);
    EXPECT_LE(z.z, 200.0);
}

TEST(EstimateZ, DeterministicModelGivesDeterministicPayoff) {
    const HestonParams p{0.05, 0.0, 0.0, 0.0, 0.0, 100.0, 0.0};
    auto s = spec(OptionKind::up_and_out_call, 90, std::numeric_limits<double>::infinity());
    const auto z = estimate_z(s, p, Scheme::strong_euler, TimeGrid{1.0, 16}, 100, 1);
    EXPECT_NEAR(z.max_payoff, 100 * std::exp(0.05) - 90, 1e-9);
    EXPECT_EQ(z.z, ceil_two_sig(z.max_payoff));
}

TEST(EstimateZ, KnockedOutEverywhereIsDegenerate) {
    const HestonParams p{0.05, 0.0, 0.0, 0.0, 0.0, 100.0, 0.0};
    auto s = spec(OptionKind::up_and_out_call, 90, 100.0);
    const auto z = estimate_z(s, p, Scheme::weak_euler, TimeGrid{1.0, 4}, 100, 1);
    EXPECT_TRUE(z.degenerate);
    EXPECT_GT(z.z, 0.0);
}

TEST(CeilTwoSig, Examples) {
    EXPECT_DOUBLE_EQ(ceil_two_sig(123.0), 130.0);
    EXPECT_DOUBLE_EQ(ceil_two_sig(120.0), 120.0);
    EXPECT_NEAR(ceil_two_sig(0.0341), 0.035, 1e-15);
}
