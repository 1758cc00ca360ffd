#include <gtest/gtest.h>

#include <cmath>

#include "hqc/config.hpp"
#include "hqc/qresource.hpp"

using namespace hqc;

namespace {

AlgorithmConfig preset(const std::string& name, Scheme s) { return load_instance(name).quantum.at(s); }

AlgorithmConfig pinned(AlgorithmConfig cfg) {
    cfg.exp_pp = PpChoice{16, 4, 0.0, true};
    cfg.arcsin_pp = PpChoice{16, 4, 0.0, true};
    return cfg;
}

}  // namespace

TEST(QResource, UsinExample) {
    const ResourceCost c = cost_usin(27, 1e-8);
    EXPECT_EQ(c.t_count, 199);
    EXPECT_GT(cost_usin(27, 1e-8, UsinMode::conventional).t_count, c.t_count);
    EXPECT_THROW(cost_usin(27, 0.0), std::invalid_argument);
}

TEST(QResource, GaussPrepParameters) {
    const GaussPrepParams g = gauss_prep_params(6.0, 1e-12);
    EXPECT_EQ(g.d_delta, 329);
    EXPECT_EQ(g.k, 16);
    EXPECT_EQ(g.m_delta, 65175);
}

TEST(QResource, GaussianPreparationCost) {
    const double t = static_cast<double>(cost_ugauss(29, 6.0, 1e-12, 1e-12).t_count);
    EXPECT_NEAR(t, 5.4e6, 0.15 * 5.4e6);
}

TEST(QResource, PathEvolutionCost) {
    EXPECT_NEAR(static_cast<double>(cost_u1(preset("q1", Scheme::weak_euler)).t_count), 6.4e6, 0.1 * 6.4e6);
    EXPECT_NEAR(static_cast<double>(cost_u1(preset("q1", Scheme::strong_euler)).t_count), 2.8e9, 0.1 * 2.8e9);
}

TEST(QResource, OracleCalls) {
    EXPECT_EQ(n_oracle(1e-3, 0.1), 7363);
    EXPECT_EQ(n_oracle(1e-2, 0.1), 677);
    EXPECT_THROW(n_oracle(0.0, 0.1), std::invalid_argument);
}

TEST(QResource, LedgerGrowsWithSteps) {
    AlgorithmConfig cfg = pinned(preset("q3", Scheme::weak_euler));
    std::int64_t last = 0;
    for (std::int64_t n : {1, 4, 16, 64}) {
        cfg.n_steps = n;
        const QubitLedger q = qubit_ledger(cfg);
        EXPECT_GT(q.qubits_a, last);
        EXPECT_EQ(q.qubits_q, q.qubits_a + 1);
        last = q.qubits_a;
    }
}

TEST(QResource, TotalsAreConsistent) {
    for (Scheme s : {Scheme::weak_euler, Scheme::strong_euler}) {
        const TotalCost t = total_cost(pinned(preset("q1", s)));
        EXPECT_EQ(t.a.t_count, t.u1.t_count + t.u2.t_count + t.u3.t_count);
        EXPECT_EQ(t.q.t_count, 2 * t.a.t_count + t.reflection.t_count);
        EXPECT_EQ(t.t_count, t.n_oracle * t.q.t_count);
        EXPECT_EQ(t.t_depth, t.n_oracle * t.q.t_depth);
        EXPECT_EQ(t.qubits, t.ledger.qubits_q);
    }
    EXPECT_GT(total_cost(pinned(preset("q1", Scheme::strong_euler))).t_count,
              100 * total_cost(pinned(preset("q1", Scheme::weak_euler))).t_count);
}

TEST(QResource, ErrorBudgetSums) {
    AlgorithmConfig cfg = preset("q1", Scheme::weak_euler);
    const ErrorBudget b = error_budget(cfg, 0.0);
    EXPECT_DOUBLE_EQ(b.sin, 2.0 * 7363 * 1e-8);
    EXPECT_EQ(b.gauss, 0.0);
    EXPECT_DOUBLE_EQ(b.total, 1e-3 + b.sin);
    const ErrorBudget s = error_budget(preset("q1", Scheme::strong_euler), 1e-4);
    EXPECT_DOUBLE_EQ(s.gauss, 4.0 * 256 * 7363 * 2e-12);
    EXPECT_THROW(error_budget(cfg, -1.0), std::invalid_argument);
}

TEST(QResource, TaylorHasNoCircuit) {
    AlgorithmConfig cfg = preset("q1", Scheme::weak_euler);
    cfg.scheme = Scheme::weak_taylor2;
    EXPECT_THROW(cost_u1(cfg), std::invalid_argument);
}
