#pragma once

// Fault-tolerant cost of the amplitude-estimation pricer: A = U3 U2 U1 and
// the Grover iterate Q built from it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "hqc/costs.hpp"
#include "hqc/fixedpoint.hpp"
#include "hqc/payoff.hpp"
#include "hqc/piecewise_poly.hpp"
#include "hqc/schemes.hpp"

namespace hqc {

enum class UsinMode { conventional, optimized };

/// Rotation-synthesis terms are real valued; they are rounded up once, at
/// the end of each formula.
inline std::int64_t ceil_to_int(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9)); }

inline ResourceCost cost_usin(std::int64_t n, double eps_sin, UsinMode mode = UsinMode::optimized) {
    if (!(eps_sin > 0.0 && eps_sin < 1.0)) throw std::invalid_argument("eps_sin: must lie in (0, 1)");
    const double dn = static_cast<double>(n);
    if (mode == UsinMode::conventional) {
        const std::int64_t t = ceil_to_int(3.3 * dn * std::log2(2.0 * dn / eps_sin));
        return {t, t, 1};
    }
    const double lg = std::log2(2.0 / eps_sin);
    return {ceil_to_int(4.0 * dn + 3.3 * lg), ceil_to_int(dn + 1.15 * lg + 1.0), 3 * n + 2};
}

struct GaussPrepParams {
    double beta = 0.0;
    double f_lb = 0.0;  // lower bound on the filling fraction
    double delta = 0.0;
    std::int64_t d_delta = 0;
    std::int64_t k = 0;  // amplitude-amplification rounds
    std::int64_t m_delta = 0;
};

inline GaussPrepParams gauss_prep_params(double eta, double eps_prep) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta: must be positive");
    if (!(eps_prep > 0.0)) throw std::invalid_argument("eps_prep: must be positive");
    GaussPrepParams g;
    g.beta = 0.5 * eta * eta;
    g.f_lb = std::pow(2.0, 0.25) / (5.0 * std::sqrt(eta));
    g.delta = eps_prep * g.f_lb;
    const double pi = std::numbers::pi;
    g.d_delta = ceil_to_int((pi * pi / 8.0 * g.beta + std::log(1.0 / g.delta)) / (1.0 - std::sin(1.0)) - 1.0);
    g.k = ceil_to_int(pi / (4.0 * std::asin(0.5 * g.f_lb)) - 0.5);
    g.m_delta = (6 * g.d_delta + 1) * (2 * g.k + 1);
    return g;
}

inline ResourceCost cost_ugauss(std::int64_t n, double eta, double eps_prep, double eps_gauss) {
    if (!(eps_gauss > 0.0)) throw std::invalid_argument("eps_gauss: must be positive");
    const GaussPrepParams g = gauss_prep_params(eta, eps_prep);
    const std::int64_t rounds = 2 * g.k + 1;
    const double synth = 1.15 * std::log2(static_cast<double>(g.m_delta) / eps_gauss);
    ResourceCost c;
    c.t_count = ceil_to_int(static_cast<double>(4 * n * g.d_delta * rounds + 4 * g.k * (n + 4)) +
                            static_cast<double>(g.m_delta) * synth);
    c.t_depth = ceil_to_int(static_cast<double>(g.d_delta * (n + 1) * rounds + g.k * (n + 4)) +
                            static_cast<double>((5 * g.d_delta + 1) * rounds) * synth);
    c.ancilla = 3 * n + 6;
    return c;
}

/// Number of pieces and degree of a piecewise-polynomial approximant.
struct PpChoice {
    int m = 1;
    int d = 0;
    double sup_error = 0.0;
    bool pinned = false;
};

struct AlgorithmConfig {
    Scheme scheme = Scheme::weak_euler;
    OptionKind kind = OptionKind::asian_call;
    std::int64_t n_steps = 1;
    FixedFormat fmt;
    double eps_sin = 1e-8;
    double eps_gauss = 1e-12;
    double eps_prep = 1e-12;
    double eps_exp = 1e-6;
    double eps_arcsin = 1e-6;
    double eps_estimate = 1e-3;
    double delta_fail = 0.1;
    double eta = 6.0;
    double exp_lo = -2.0;  // domain of the exp approximant (log returns)
    double exp_hi = 2.0;
    std::optional<PpChoice> exp_pp;
    std::optional<PpChoice> arcsin_pp;

    void validate() const {
        if (scheme == Scheme::weak_taylor2) {
            throw std::invalid_argument("scheme: weak-taylor2 has no quantum circuit; use strong-euler or weak-euler");
        }
        if (n_steps < 0) throw std::invalid_argument("n_steps: must be nonnegative");
        fmt.validate();
        auto unit = [](double v, const char* key) {
            if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(key) + ": must lie in (0, 1)");
        };
        unit(eps_sin, "eps_sin");
        unit(eps_gauss, "eps_gauss");
        unit(eps_prep, "eps_prep");
        unit(eps_exp, "eps_exp");
        unit(eps_arcsin, "eps_arcsin");
        unit(eps_estimate, "eps_estimate");
        unit(delta_fail, "delta");
        if (!(eta > 0.0)) throw std::invalid_argument("eta: must be positive");
        if (!(exp_hi > exp_lo)) throw std::invalid_argument("exp_domain: need lo < hi");
    }
};

// arcsin is only ever evaluated on sqrt(y) with y <= 3/4.
inline constexpr double kArcsinDomainHi = 0.8660254037844387;

inline PiecewisePoly fit_exp(const AlgorithmConfig& cfg) {
    if (cfg.exp_pp && cfg.exp_pp->pinned) {
        return fit_piecewise(target_function(TargetFunction::exp), cfg.exp_lo, cfg.exp_hi, cfg.exp_pp->m,
                             cfg.exp_pp->d);
    }
    return build_piecewise_poly(target_function(TargetFunction::exp), cfg.exp_lo, cfg.exp_hi, cfg.eps_exp, cfg.fmt);
}

inline PiecewisePoly fit_arcsin(const AlgorithmConfig& cfg) {
    if (cfg.arcsin_pp && cfg.arcsin_pp->pinned) {
        return fit_piecewise(target_function(TargetFunction::arcsin), 0.0, kArcsinDomainHi, cfg.arcsin_pp->m,
                             cfg.arcsin_pp->d);
    }
    return build_piecewise_poly(target_function(TargetFunction::arcsin), 0.0, kArcsinDomainHi, cfg.eps_arcsin,
                                cfg.fmt);
}

/// Fills in any (M, d) not pinned by the caller with the cheapest fit.
inline AlgorithmConfig resolve_approximants(AlgorithmConfig cfg) {
    if (!cfg.exp_pp || !cfg.exp_pp->pinned) {
        const PiecewisePoly pp = fit_exp(cfg);
        cfg.exp_pp = PpChoice{pp.m, pp.d, pp.sup_error, false};
    }
    if (!cfg.arcsin_pp || !cfg.arcsin_pp->pinned) {
        const PiecewisePoly pp = fit_arcsin(cfg);
        cfg.arcsin_pp = PpChoice{pp.m, pp.d, pp.sup_error, false};
    }
    return cfg;
}

inline ResourceCost cost_u1(const AlgorithmConfig& cfg) {
    cfg.validate();
    const std::int64_t n = cfg.fmt.n, p = cfg.fmt.p;
    ResourceCost step = 5 * cost_primitive(Primitive::add, n) + 2 * cost_primitive(Primitive::add_const, n) +
                        10 * cost_primitive(Primitive::mul_const, n, p) + 2 * cost_primitive(Primitive::sqrt, n);
    if (cfg.scheme == Scheme::strong_euler) {
        step = 2 * cost_ugauss(n, cfg.eta, cfg.eps_prep, cfg.eps_gauss) + step +
               4 * cost_primitive(Primitive::mul, n, p);
    }
    return cfg.n_steps * step;
}

inline ResourceCost cost_u2(const AlgorithmConfig& cfg) {
    cfg.validate();
    if (!cfg.exp_pp) throw std::invalid_argument("exp_pp: piecewise-polynomial configuration missing");
    const std::int64_t n = cfg.fmt.n, p = cfg.fmt.p, big_n = cfg.n_steps;
    const ResourceCost exp = cost_primitive(Primitive::exp, n, p, cfg.exp_pp->m, cfg.exp_pp->d);
    const ResourceCost toffoli3 = cost_primitive(Primitive::toffoli_jones, 3);
    if (is_asian(cfg.kind)) {
        return big_n * exp + (big_n - 1) * cost_primitive(Primitive::add, n) +
               cost_primitive(Primitive::mul_const, n, p) + cost_primitive(Primitive::sub_const, n) + n * toffoli3;
    }
    return big_n * cost_primitive(Primitive::comp_const, n) + cost_primitive(Primitive::toffoli_jones, big_n + 1) +
           exp + cost_primitive(Primitive::mul_const, n, p) + cost_primitive(Primitive::add_const, n) +
           (2 * n) * toffoli3;
}

inline ResourceCost cost_u3(const AlgorithmConfig& cfg) {
    cfg.validate();
    if (!cfg.arcsin_pp) throw std::invalid_argument("arcsin_pp: piecewise-polynomial configuration missing");
    const std::int64_t n = cfg.fmt.n, p = cfg.fmt.p;
    return cost_primitive(Primitive::arcsin_sqrt, n, p, cfg.arcsin_pp->m, cfg.arcsin_pp->d) +
           cost_usin(n, cfg.eps_sin, UsinMode::optimized);
}

/// Peak logical-qubit usage of A. Every persistent register is counted as
/// live from the start; each stage adds its working registers and the
/// largest ancilla pool of the primitives it runs.
struct QubitLedger {
    std::int64_t path_registers = 0;     // A_j, B_j for j = 0..N
    std::int64_t noise_registers = 0;    // E
    std::int64_t payoff_registers = 0;   // G
    std::int64_t output_registers = 0;   // C, D, H
    std::int64_t stage_prep = 0;
    std::int64_t stage_u1 = 0;
    std::int64_t stage_u2 = 0;
    std::int64_t stage_u3 = 0;
    std::int64_t qubits_a = 0;
    std::int64_t qubits_q = 0;  // Q adds one qubit to A
};

inline QubitLedger qubit_ledger(const AlgorithmConfig& cfg) {
    cfg.validate();
    if (!cfg.exp_pp || !cfg.arcsin_pp) throw std::invalid_argument("qubit_ledger: piecewise-polynomial configuration missing");
    const std::int64_t n = cfg.fmt.n, p = cfg.fmt.p, big_n = cfg.n_steps;
    const bool strong = cfg.scheme == Scheme::strong_euler;
    QubitLedger q;
    q.path_registers = 2 * n * (big_n + 1);
    q.noise_registers = 2 * big_n * (strong ? n : 1);
    q.payoff_registers = is_asian(cfg.kind) ? big_n * n + n : big_n + 1 + 2 * n;
    q.output_registers = n + 1 + n;
    const std::int64_t base = q.path_registers + q.noise_registers;

    if (strong) q.stage_prep = base + cost_ugauss(n, cfg.eta, cfg.eps_prep, cfg.eps_gauss).ancilla;

    std::int64_t u1_pool = std::max({cost_primitive(Primitive::sqrt, n).ancilla,
                                     cost_primitive(Primitive::mul_const, n, p).ancilla,
                                     cost_primitive(Primitive::add, n).ancilla,
                                     cost_primitive(Primitive::add_const, n).ancilla});
    if (strong) u1_pool = std::max(u1_pool, cost_primitive(Primitive::mul, n, p).ancilla);
    const std::int64_t j_reg = n, l_reg = strong ? 2 * n : 0, m_reg = 5 * n;
    q.stage_u1 = big_n > 0 ? base + j_reg + l_reg + m_reg + u1_pool : base;

    std::int64_t u2_pool = std::max({cost_primitive(Primitive::exp, n, p, cfg.exp_pp->m, cfg.exp_pp->d).ancilla,
                                     cost_primitive(Primitive::mul_const, n, p).ancilla,
                                     cost_primitive(Primitive::add_const, n).ancilla,
                                     cost_primitive(Primitive::toffoli_jones, 3).ancilla});
    if (is_asian(cfg.kind)) {
        u2_pool = std::max(u2_pool, cost_primitive(Primitive::add, n).ancilla);
    } else {
        u2_pool = std::max({u2_pool, cost_primitive(Primitive::comp_const, n).ancilla,
                            cost_primitive(Primitive::toffoli_jones, big_n + 1).ancilla});
    }
    q.stage_u2 = base + q.payoff_registers + n + u2_pool;

    const std::int64_t u3_pool =
        std::max(cost_primitive(Primitive::arcsin_sqrt, n, p, cfg.arcsin_pp->m, cfg.arcsin_pp->d).ancilla,
                 cost_usin(n, cfg.eps_sin).ancilla);
    q.stage_u3 = base + q.payoff_registers + q.output_registers + u3_pool;

    q.qubits_a = std::max({q.stage_prep, q.stage_u1, q.stage_u2, q.stage_u3});
    q.qubits_q = q.qubits_a + 1;
    return q;
}

/// Grover-iterate budget of iterative amplitude estimation for additive
/// error eps with failure probability delta, rounded to the nearest integer.
inline std::int64_t n_oracle(double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps: must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta: must lie in (0, 1)");
    const double bound = 1.4 / eps * std::log(2.0 / delta * std::log2(std::numbers::pi / (4.0 * eps)));
    return std::llround(bound);
}

struct TotalCost {
    ResourceCost u1, u2, u3;
    ResourceCost a;            // U3 U2 U1
    ResourceCost reflection;   // multi-controlled Toffoli of R0
    ResourceCost q;            // A R0 A^-1 S0
    QubitLedger ledger;
    std::int64_t n_oracle = 0;
    std::int64_t t_count = 0;  // n_oracle * T(Q)
    std::int64_t t_depth = 0;
    std::int64_t qubits = 0;
};

inline TotalCost total_cost(const AlgorithmConfig& raw_cfg) {
    const AlgorithmConfig cfg = resolve_approximants(raw_cfg);
    TotalCost t;
    t.u1 = cost_u1(cfg);
    t.u2 = cost_u2(cfg);
    t.u3 = cost_u3(cfg);
    t.a = t.u1 + t.u2 + t.u3;
    t.ledger = qubit_ledger(cfg);
    t.reflection = cost_primitive(Primitive::toffoli_amy, t.ledger.qubits_a);
    t.q = {2 * t.a.t_count + t.reflection.t_count, 2 * t.a.t_depth + t.reflection.t_depth,
           std::max(t.a.ancilla, t.reflection.ancilla)};
    t.n_oracle = n_oracle(cfg.eps_estimate, cfg.delta_fail);
    t.t_count = t.n_oracle * t.q.t_count;
    t.t_depth = t.n_oracle * t.q.t_depth;
    t.qubits = t.ledger.qubits_q;
    return t;
}

struct ErrorBudget {
    double estimate = 0.0;
    double arithm = 0.0;  // fixed-point arithmetic (and, for strong Euler, Gaussian discretization)
    double sin = 0.0;     // 2 N_oracle eps_sin
    double gauss = 0.0;   // 4 N N_oracle (eps_prep + eps_gauss), strong Euler only
    double total = 0.0;
};

inline ErrorBudget error_budget(const AlgorithmConfig& cfg, double eps_arithm) {
    cfg.validate();
    if (!(eps_arithm >= 0.0)) throw std::invalid_argument("eps_arithm: must be nonnegative");
    const double calls = static_cast<double>(n_oracle(cfg.eps_estimate, cfg.delta_fail));
    ErrorBudget b;
    b.estimate = cfg.eps_estimate;
    b.arithm = eps_arithm;
    b.sin = 2.0 * calls * cfg.eps_sin;
    if (cfg.scheme == Scheme::strong_euler) {
        b.gauss = 4.0 * static_cast<double>(cfg.n_steps) * calls * (cfg.eps_prep + cfg.eps_gauss);
    }
    b.total = b.estimate + b.arithm + b.sin + b.gauss;
    return b;
}

}  // namespace hqc
