#pragma once

// Classical replay of the pricing circuit under fixed-point arithmetic. Each
// sample path is evolved twice from the same random draws, once in double
// precision and once through the fixed-point operation chain of the
// circuit, and the two normalized payoffs are compared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqc/discrete_gaussian.hpp"
#include "hqc/fixedpoint.hpp"
#include "hqc/normal.hpp"
#include "hqc/parallel.hpp"
#include "hqc/payoff.hpp"
#include "hqc/piecewise_poly.hpp"
#include "hqc/rng.hpp"
#include "hqc/schemes.hpp"

namespace hqc {

class ReplayOverflow : public FixedPointOverflow {
public:
    ReplayOverflow(std::uint32_t step, std::uint64_t sample, const std::string& what)
        : FixedPointOverflow("overflow at step " + std::to_string(step) + " of sample " + std::to_string(sample) +
                             ": " + what),
          step_(step),
          sample_(sample) {}

    /// Time step at which the overflow happened; N + 1 means the payoff stage.
    std::uint32_t step() const noexcept { return step_; }
    std::uint64_t sample() const noexcept { return sample_; }

private:
    std::uint32_t step_;
    std::uint64_t sample_;
};

struct ArithErrorResult {
    double eps_arithm = 0.0;         // mean |fixed payoff - float payoff|
    double max_payoff_dev = 0.0;
    std::vector<double> max_dev_y1;  // per step j = 0..N, max over samples
    std::vector<double> max_dev_y2;
    std::uint64_t n_samples = 0;
};

namespace detail {

struct FixedPathConstants {
    FixedValue half_h, rho_sqrt_h, rhoc_sqrt_h, kappa_h, xi_sqrt_h, r_h, kappa_theta_h;
    FixedValue zero;
};

// The drift terms -Y2 h/2 and -Y2 kappa h are formed as products with the
// positive constants and then subtracted.
inline FixedPathConstants path_constants(const HestonParams& p, double h, const FixedFormat& fmt) {
    const double sh = std::sqrt(h);
    return {quantize(0.5 * h, fmt),
            quantize(p.rho * sh, fmt),
            quantize(std::sqrt(h * (1.0 - p.rho * p.rho)), fmt),
            quantize(p.kappa * h, fmt),
            quantize(p.xi * sh, fmt),
            quantize(p.r * h, fmt),
            quantize(p.kappa * p.theta * h, fmt),
            quantize(0.0, fmt)};
}

/// Fixed-point ARCSIN_SQRT: arcsin(sqrt(x)) for x < 1/4, else
/// pi/2 - arcsin(sqrt(1 - x)).
inline FixedValue fixed_arcsin_sqrt(const FixedValue& x, const PiecewisePoly& pp_arcsin) {
    const FixedFormat& fmt = x.fmt;
    const bool small = !fx_compare_const(x, 0.25);
    const FixedValue y = small ? x : fx_sub(quantize(1.0, fmt), x);
    const FixedValue v = pp_arcsin.eval_fixed(fx_sqrt(y));
    return small ? v : fx_sub(quantize(0.5 * std::numbers::pi, fmt), v);
}

}  // namespace detail

/// Mean absolute difference between the payoff amplitude produced by the
/// fixed-point circuit and the exact normalized payoff. For strong Euler the
/// fixed-point path draws its normals from the discrete Gaussian on 2^n
/// points (support [-eta, eta)), coupled to the float path's normals through
/// a shared uniform, so the result also contains the discretization error.
inline ArithErrorResult estimate_arith_error(const OptionSpec& spec, const HestonParams& params, Scheme scheme,
                                             const FixedFormat& fmt, const PiecewisePoly& pp_exp,
                                             const PiecewisePoly& pp_arcsin, const TimeGrid& grid,
                                             std::uint64_t n_samples, std::uint64_t seed, double eta = 6.0) {
    spec.validate();
    grid.validate();
    fmt.validate();
    if (scheme == Scheme::weak_taylor2) throw std::invalid_argument("scheme: replay supports strong-euler and weak-euler");
    if (!spec.z_bound) throw std::invalid_argument("z_bound: required for the replay");
    if (n_samples == 0) throw std::invalid_argument("samples: must be at least 1");

    const std::uint32_t big_n = grid.n_steps;
    const double h = grid.h();
    const double z = *spec.z_bound;
    const bool asian = is_asian(spec.kind);
    const bool call = is_call(spec.kind);
    const DiscreteGaussian gauss(std::uint64_t{1} << std::min(fmt.n, 62), eta);

    ArithErrorResult out;
    out.n_samples = n_samples;
    out.max_dev_y1.assign(big_n + 1, 0.0);
    out.max_dev_y2.assign(big_n + 1, 0.0);
    std::vector<double> devs(n_samples, 0.0);
    std::mutex merge;

    parallel_for(n_samples, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dev1(big_n + 1, 0.0), dev2(big_n + 1, 0.0);
        std::vector<double> y1_float(big_n + 1);
        std::vector<FixedValue> y1_fixed(big_n + 1);
        for (std::size_t i = begin; i < end; ++i) {
            std::uint32_t stage = 0;
            try {
                const detail::FixedPathConstants k = detail::path_constants(params, h, fmt);
                CounterRng rng(seed, i);
                PathState fl{0.0, params.nu0};
                FixedValue a = k.zero;
                FixedValue b = quantize(params.nu0, fmt);
                y1_float[0] = 0.0;
                y1_fixed[0] = a;
                dev2[0] = std::max(dev2[0], std::fabs(b.value() - fl.y2));
                for (std::uint32_t j = 1; j <= big_n; ++j) {
                    stage = j;
                    const FixedValue root = fx_sqrt(b.raw < 0 ? k.zero : b);
                    FixedValue g2, g3, g5;
                    bool plus1 = true, plus2 = true;
                    if (scheme == Scheme::strong_euler) {
                        const double u1 = rng.uniform(), u2 = rng.uniform();
                        fl = step_strong_euler(fl, params, h, {normal_inv_cdf(u1), normal_inv_cdf(u2)});
                        const FixedValue alpha = quantize(gauss.sample_coupled(u1), fmt);
                        const FixedValue beta = quantize(gauss.sample_coupled(u2), fmt);
                        const FixedValue lam1 = fx_mul(alpha, root);
                        const FixedValue lam2 = fx_mul(beta, root);
                        g2 = fx_mul(lam1, k.rho_sqrt_h);
                        g3 = fx_mul(lam2, k.rhoc_sqrt_h);
                        g5 = fx_mul(lam1, k.xi_sqrt_h);
                    } else {
                        const WeakEulerIncrement s = sample_weak(rng);
                        fl = step_weak_euler(fl, params, h, s);
                        plus1 = s.s1 > 0;
                        plus2 = s.s2 > 0;
                        g2 = fx_mul(root, k.rho_sqrt_h);
                        g3 = fx_mul(root, k.rhoc_sqrt_h);
                        g5 = fx_mul(root, k.xi_sqrt_h);
                    }
                    const FixedValue g1 = fx_mul(b, k.half_h);
                    const FixedValue g4 = fx_mul(b, k.kappa_h);
                    a = fx_sub(a, g1);
                    a = plus1 ? fx_add(a, g2) : fx_sub(a, g2);
                    a = plus2 ? fx_add(a, g3) : fx_sub(a, g3);
                    a = fx_add(a, k.r_h);
                    b = fx_sub(b, g4);
                    b = plus1 ? fx_add(b, g5) : fx_sub(b, g5);
                    b = fx_add(b, k.kappa_theta_h);
                    y1_float[j] = fl.y1;
                    y1_fixed[j] = a;
                    dev1[j] = std::max(dev1[j], std::fabs(a.value() - fl.y1));
                    dev2[j] = std::max(dev2[j], std::fabs(b.value() - fl.y2));
                }

                stage = big_n + 1;
                FixedValue x = k.zero;
                const FixedValue strike = quantize(spec.strike / z, fmt);
                if (asian) {
                    FixedValue acc = pp_exp.eval_fixed(y1_fixed[1]);
                    for (std::uint32_t j = 2; j <= big_n; ++j) acc = fx_add(acc, pp_exp.eval_fixed(y1_fixed[j]));
                    const FixedValue scaled = fx_mul_const(acc, params.s0 / (static_cast<double>(big_n) * z));
                    x = call ? fx_sub(scaled, strike) : fx_sub(strike, scaled);
                } else {
                    const FixedValue level = quantize(std::log(*spec.barrier / params.s0), fmt);
                    FixedValue hi = y1_fixed[1], lo = y1_fixed[1];
                    for (std::uint32_t j = 2; j <= big_n; ++j) {
                        if (y1_fixed[j].raw > hi.raw) hi = y1_fixed[j];
                        if (y1_fixed[j].raw < lo.raw) lo = y1_fixed[j];
                    }
                    if (barrier_alive(spec.kind, level.value(), hi.value(), lo.value())) {
                        const FixedValue scaled = fx_mul_const(pp_exp.eval_fixed(y1_fixed[big_n]), params.s0 / z);
                        x = call ? fx_sub(scaled, strike) : fx_sub(strike, scaled);
                    }
                }
                if (x.raw < 0) x = k.zero;
                const FixedValue one = quantize(1.0, fmt);
                if (x.raw > one.raw) x = one;
                const double s = std::sin(detail::fixed_arcsin_sqrt(x, pp_arcsin).value());
                const double exact = normalized_logreturn_payoff(spec, params.s0, y1_float);
                devs[i] = std::fabs(s * s - exact);
            } catch (const ReplayOverflow&) {
                throw;
            } catch (const FixedPointOverflow& e) {
                throw ReplayOverflow(stage, i, e.what());
            }
        }
        std::lock_guard lock(merge);
        for (std::uint32_t j = 0; j <= big_n; ++j) {
            out.max_dev_y1[j] = std::max(out.max_dev_y1[j], dev1[j]);
            out.max_dev_y2[j] = std::max(out.max_dev_y2[j], dev2[j]);
        }
    });
    out.eps_arithm = static_cast<double>(pairwise_sum(devs.data(), devs.size()) / static_cast<long double>(n_samples));
    for (double d : devs) out.max_payoff_dev = std::max(out.max_payoff_dev, d);
    return out;
}

}  // namespace hqc
