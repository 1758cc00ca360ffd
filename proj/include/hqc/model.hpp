#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hqc/normal.hpp"

namespace hqc {

struct HestonParams {
    double r = 0.0;      // risk-free rate
    double rho = 0.0;    // price/variance correlation
    double kappa = 0.0;  // mean-reversion rate
    double theta = 0.0;  // long-run variance
    double xi = 0.0;     // vol-of-vol
    double s0 = 0.0;     // spot
    double nu0 = 0.0;    // initial variance
};

/// (Y1, Y2) = (log return, variance). Y2 may dip below zero between steps.
struct PathState {
    double y1 = 0.0;
    double y2 = 0.0;
};

struct SdeCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    double b11 = 0.0;
    double b12 = 0.0;
    double b21 = 0.0;
};

enum class VariancePolicy { full_truncation, strict };

inline bool feller_check(const HestonParams& p) noexcept {
    return 2.0 * p.kappa * p.theta > p.xi * p.xi;
}

/// Throws std::invalid_argument naming the first offending field.
inline void validate(const HestonParams& p, bool allow_feller_violation = false) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument(key + ": " + why);
    };
    const double fields[] = {p.r, p.rho, p.kappa, p.theta, p.xi, p.s0, p.nu0};
    const char* names[] = {"r", "rho", "kappa", "theta", "xi", "s0", "nu0"};
    for (int i = 0; i < 7; ++i) {
        if (!std::isfinite(fields[i])) fail(names[i], "must be finite");
    }
    if (p.rho < -1.0 || p.rho > 1.0) fail("rho", "must lie in [-1, 1]");
    if (p.kappa <= 0.0) fail("kappa", "must be positive");
    if (p.theta <= 0.0) fail("theta", "must be positive");
    if (p.xi < 0.0) fail("xi", "must be nonnegative");
    if (p.s0 <= 0.0) fail("s0", "must be positive");
    if (p.nu0 < 0.0) fail("nu0", "must be nonnegative");
    if (!allow_feller_violation && !feller_check(p)) fail("xi", "Feller condition 2*kappa*theta > xi^2 violated");
}

/// Standard-form drift and diffusion at variance state.y2. Under full
/// truncation the square roots see max(nu, 0) while a2 keeps the raw nu.
inline SdeCoefficients coefficients(const HestonParams& p, const PathState& state,
                                    VariancePolicy policy = VariancePolicy::full_truncation) {
    const double nu = state.y2;
    if (nu < 0.0 && policy == VariancePolicy::strict) {
        throw std::domain_error("negative variance " + std::to_string(nu));
    }
    const double sq = std::sqrt(std::max(nu, 0.0));
    SdeCoefficients c;
    c.a1 = p.r - 0.5 * nu;
    c.a2 = p.kappa * (p.theta - nu);
    c.b11 = p.rho * sq;
    c.b12 = std::sqrt(1.0 - p.rho * p.rho) * sq;
    c.b21 = p.xi * sq;
    return c;
}

inline double bs_call_price(double s, double k, double tau, double r, double sigma) {
    if (!(s > 0.0) || k < 0.0 || tau < 0.0 || sigma < 0.0) {
        throw std::invalid_argument("bs_call_price: need s > 0, k >= 0, tau >= 0, sigma >= 0");
    }
    const double disc_k = k * std::exp(-r * tau);
    if (sigma == 0.0 || tau == 0.0 || k == 0.0) {
        return std::max(s - disc_k, 0.0);
    }
    const double vol = sigma * std::sqrt(tau);
    const double d_plus = (std::log(s / k) + (r + 0.5 * sigma * sigma) * tau) / vol;
    const double d_minus = d_plus - vol;
    return s * normal_cdf(d_plus) - disc_k * normal_cdf(d_minus);
}

}  // namespace hqc
