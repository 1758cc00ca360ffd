#include <gtest/gtest.h>

#include <cmath>

#include "hqc/schemes.hpp"

using namespace hqc;

namespace {

const HestonParams kToy{0.0, 0.0, 2.0, 0.04, 0.2, 100.0, 0.04};
const HestonParams kSetting1{0.03, -0.1, 2.0, 0.12, 0.3, 100.0, 0.1};

}  // namespace

TEST(StrongEuler, ZeroIncrementIsDrift) {
    const PathState s{0.1, 0.07};
    const auto out = step_strong_euler(s, kSetting1, 0.01, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(out.y1, 0.1 + (0.03 - 0.035) * 0.01);
    const auto fixed = step_strong_euler({0.0, 0.12}, kSetting1, 0.01, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(fixed.y2, 0.12);
}

TEST(StrongEuler, HandExample) {
    const auto out = step_strong_euler({0.0, 0.04}, kToy, 0.01, {1.0, -1.0});
    EXPECT_NEAR(out.y1, -0.0002 - 0.02, 1e-15);
    EXPECT_NEAR(out.y2, 0.044, 1e-15);
}

TEST(WeakEuler, HandExampleAndAgreementWithStrong) {
    const auto out = step_weak_euler({0.0, 0.04}, kToy, 0.01, {1, -1});
    EXPECT_NEAR(out.y1, -0.0202, 1e-15);
    EXPECT_NEAR(out.y2, 0.044, 1e-15);
    for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
            const auto w = step_weak_euler({0.2, 0.09}, kSetting1, 0.02, {a, b});
            const auto s = step_strong_euler({0.2, 0.09}, kSetting1, 0.02, {double(a), double(b)});
            EXPECT_EQ(w.y1, s.y1);
            EXPECT_EQ(w.y2, s.y2);
        }
    }
}

TEST(WeakEuler, DeterministicVarianceWithoutVolOfVol) {
    HestonParams p = kSetting1;
    p.xi = 0.0;
    p.rho = 0.0;
    const auto out = step_weak_euler({0.0, 0.05}, p, 0.1, {1, 1});
    EXPECT_DOUBLE_EQ(out.y2, 0.05 + 2.0 * (0.12 - 0.05) * 0.1);
}

// Enumerate the four weak outcomes and integrate the strong step exactly.
TEST(WeakEuler, FirstTwoMomentsMatchStrong) {
    const double h = 0.01;
    const PathState s{0.0, 0.09};
    double m1 = 0, m2 = 0;
    for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
            const double d = step_weak_euler(s, kSetting1, h, {a, b}).y1;
            m1 += 0.25 * d;
            m2 += 0.25 * d * d;
        }
    }
    const auto c = coefficients(kSetting1, s);
    const double mean = c.a1 * h;
    const double var = (c.b11 * c.b11 + c.b12 * c.b12) * h;
    EXPECT_NEAR(m1, mean, 1e-15);
    EXPECT_NEAR(m2 - m1 * m1, var, 1e-15);
}

TEST(WeakTaylor2, SmallStepApproachesIdentity) {
    const PathState s{0.05, 0.08};
    const double h = 1e-10;
    const double jump = std::sqrt(3 * h);
    const auto out = step_weak_taylor2(s, kSetting1, h, {jump, -jump, h});
    EXPECT_NEAR(out.y1, s.y1, 1e-5);
    EXPECT_NEAR(out.y2, s.y2, 1e-5);
}

TEST(WeakTaylor2, ZeroIncrementsFollowDriftExpansion) {
    const PathState s{0.0, 0.08};
    const double h = 0.01;
    const auto out = step_weak_taylor2(s, kSetting1, h, {0.0, 0.0, h});
    const auto c = coefficients(kSetting1, s);
    // Second-order drift terms plus the W1*W1 - h and W1*W2 + V12 corrections.
    const double rho_c = std::sqrt(1 - 0.01);
    const double expect1 = c.a1 * h - 0.5 * 2.0 * (0.12 - 0.08) * 0.5 * h * h - 0.5 * 0.5 * (-0.1) * 0.3 * h +
                           0.5 * 0.5 * rho_c * 0.3 * h;
    const double expect2 = c.a2 * h - 4.0 * (0.12 - 0.08) * 0.5 * h * h - 0.5 * 0.5 * 0.09 * h;
    EXPECT_NEAR(out.y1, expect1, 1e-15);
    EXPECT_NEAR(out.y2, 0.08 + expect2, 1e-15);
}

TEST(WeakTaylor2, SamplerProbabilities) {
    CounterRng rng(3, 0);
    const double h = 0.01;
    int zero = 0, plus = 0;
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
        const auto inc = sample_taylor2(rng, h);
        zero += inc.w1 == 0.0;
        plus += inc.w1 > 0.0;
        ASSERT_TRUE(inc.v12 == h || inc.v12 == -h);
    }
    EXPECT_NEAR(double(zero) / n, 2.0 / 3.0, 0.004);
    EXPECT_NEAR(double(plus) / n, 1.0 / 6.0, 0.003);
}

TEST(Paths, DeterministicPerSeed) {
    const TimeGrid g{1.0, 64};
    for (Scheme s : kAllSchemes) {
        CounterRng a(11, 5), b(11, 5);
        const auto pa = generate_path(s, kSetting1, g, a);
        const auto pb = generate_path(s, kSetting1, g, b);
        ASSERT_EQ(pa.states.size(), 65u);
        for (std::size_t j = 0; j < pa.states.size(); ++j) {
            EXPECT_EQ(pa.states[j].y1, pb.states[j].y1);
            EXPECT_EQ(pa.states[j].y2, pb.states[j].y2);
        }
    }
}

TEST(Paths, ConstantVarianceWhenFrozen) {
    HestonParams p = kSetting1;
    p.xi = 0.0;
    p.kappa = 0.0;
    p.nu0 = 0.04;
    for (Scheme s : kAllSchemes) {
        CounterRng rng(2, 0);
        const auto path = generate_path(s, p, TimeGrid{1.0, 32}, rng);
        for (const auto& st : path.states) EXPECT_EQ(st.y2, 0.04);
    }
}

TEST(Paths, ZeroIncrementVarianceRevertsMonotonically) {
    HestonParams p = kSetting1;
    PathState s{0.0, 0.02};
    const double h = 0.01;
    for (int j = 0; j < 2000; ++j) {
        const auto next = step_strong_euler(s, p, h, {0.0, 0.0});
        EXPECT_GE(next.y2, s.y2);
        EXPECT_LE(next.y2, p.theta);
        s = next;
    }
    EXPECT_NEAR(s.y2, p.theta, 1e-6);
}

TEST(Paths, SingleStepMatchesDrift) {
    HestonParams p = kSetting1;
    p.xi = 0.0;
    p.rho = 0.0;
    p.nu0 = 0.0;  // no diffusion in either component
    CounterRng rng(9, 0);
    const auto path = generate_path(Scheme::strong_euler, p, TimeGrid{0.5, 1}, rng);
    EXPECT_DOUBLE_EQ(path.states[1].y1, 0.03 * 0.5);
    EXPECT_DOUBLE_EQ(path.states[1].y2, 2.0 * 0.12 * 0.5);
}

TEST(SchemeNames, RoundTrip) {
    for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(scheme_name(s)), s);
    EXPECT_THROW(parse_scheme("milstein"), std::invalid_argument);
}
