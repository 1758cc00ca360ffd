#pragma once

// Outcome-level simulation of iterative amplitude estimation. Measuring the
// flag qubit after k Grover iterations succeeds with probability
// sin^2((2k+1) theta), theta = asin(sqrt(a)); no quantum state is simulated.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "hqc/rng.hpp"

namespace hqc {

struct AmplitudeOracle {
    double a_true = 0.0;
    std::uint64_t grover_calls = 0;  // applications of Q
    std::uint64_t preparations = 0;  // one application of A per shot

    explicit AmplitudeOracle(double a) : a_true(a) {
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("a: must lie in [0, 1]");
    }

    double hit_probability(std::uint64_t k) const noexcept {
        const double theta = std::asin(std::sqrt(a_true));
        const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
        return s * s;
    }
};

inline std::uint64_t grover_sample(AmplitudeOracle& oracle, std::uint64_t k, std::uint64_t shots, CounterRng& rng) {
    if (shots == 0) throw std::invalid_argument("shots: must be at least 1");
    const double prob = oracle.hit_probability(k);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < shots; ++s) hits += rng.uniform() < prob ? 1 : 0;
    oracle.grover_calls += shots * k;
    oracle.preparations += shots;
    return hits;
}

struct IqaeOptions {
    std::uint64_t shots = 100;
    double min_ratio = 2.0;
};

struct IqaeResult {
    double a_hat = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    std::uint64_t calls = 0;
    std::uint64_t rounds = 0;
};

namespace detail {

inline std::pair<double, double> clopper_pearson(std::uint64_t hits, std::uint64_t shots, double alpha) {
    double lo = 0.0, hi = 1.0;
    const double h = static_cast<double>(hits), n = static_cast<double>(shots);
    if (hits > 0) lo = boost::math::ibeta_inv(h, n - h + 1.0, alpha / 2.0);
    if (hits < shots) hi = boost::math::ibeta_inv(h + 1.0, n - h, 1.0 - alpha / 2.0);
    return {lo, hi};
}

/// Largest power k (with (4k+2) at least min_ratio times the current
/// scaling) that keeps the scaled theta interval inside one half circle.
inline std::pair<std::uint64_t, bool> find_next_k(std::uint64_t k, bool upper_half, double theta_l, double theta_u,
                                                  double min_ratio) {
    const double old_scaling = 4.0 * static_cast<double>(k) + 2.0;
    const std::int64_t max_scaling = static_cast<std::int64_t>(1.0 / (2.0 * (theta_u - theta_l)));
    std::int64_t scaling = max_scaling - (((max_scaling - 2) % 4) + 4) % 4;
    while (static_cast<double>(scaling) >= min_ratio * old_scaling) {
        const double s = static_cast<double>(scaling);
        const double lo = s * theta_l - std::floor(s * theta_l);
        const double hi = s * theta_u - std::floor(s * theta_u);
        if (lo <= hi && hi <= 0.5 && lo <= 0.5) return {static_cast<std::uint64_t>((scaling - 2) / 4), true};
        if (hi >= 0.5 && hi >= lo && lo >= 0.5) return {static_cast<std::uint64_t>((scaling - 2) / 4), false};
        scaling -= 4;
    }
    return {k, upper_half};
}

}  // namespace detail

/// Iterative amplitude estimation with Clopper-Pearson intervals. Angles are
/// kept in turns, a = sin^2(2 pi theta) with theta in [0, 1/4]; the loop
/// stops once the theta interval is narrower than eps / pi, which bounds
/// the amplitude interval width by 2 eps.
inline IqaeResult iqae_estimate(AmplitudeOracle& oracle, double eps, double delta, CounterRng& rng,
                                const IqaeOptions& opt = {}) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps: must lie in (0, 0.5)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta: must lie in (0, 1)");
    const double pi = std::numbers::pi;
    const std::uint64_t start_calls = oracle.grover_calls;
    const auto max_rounds = static_cast<std::uint64_t>(std::log(opt.min_ratio * pi / 8.0 / eps) /
                                                       std::log(opt.min_ratio)) + 1;
    std::vector<std::uint64_t> powers{0};
    std::vector<std::uint64_t> hits_per_round;
    double theta_l = 0.0, theta_u = 0.25;
    double a_l = 0.0, a_u = 1.0;
    bool upper_half = true;

    while (theta_u - theta_l > eps / pi) {
        auto [k, half] = detail::find_next_k(powers.back(), upper_half, theta_l, theta_u, opt.min_ratio);
        upper_half = half;
        powers.push_back(k);
        const std::uint64_t hits = grover_sample(oracle, k, opt.shots, rng);

        // Rounds that reuse the previous power are pooled.
        std::uint64_t pooled_hits = hits, pooled_shots = opt.shots;
        for (std::size_t j = hits_per_round.size(); j > 0 && powers[j] == k; --j) {
            pooled_hits += hits_per_round[j - 1];
            pooled_shots += opt.shots;
        }
        hits_per_round.push_back(hits);

        const auto [p_lo, p_hi] =
            detail::clopper_pearson(pooled_hits, pooled_shots, delta / static_cast<double>(max_rounds));
        double t_min, t_max;
        if (upper_half) {
            t_min = std::acos(1.0 - 2.0 * p_lo) / (2.0 * pi);
            t_max = std::acos(1.0 - 2.0 * p_hi) / (2.0 * pi);
        } else {
            t_min = 1.0 - std::acos(1.0 - 2.0 * p_hi) / (2.0 * pi);
            t_max = 1.0 - std::acos(1.0 - 2.0 * p_lo) / (2.0 * pi);
        }
        // Both ends lie in the same half period, so the period index comes
        // from the lower end; flooring the upper end would skip a period
        // whenever it sits exactly on a boundary.
        const double scaling = 4.0 * static_cast<double>(k) + 2.0;
        const double period = std::floor(scaling * theta_l);
        theta_u = (period + t_max) / scaling;
        theta_l = (period + t_min) / scaling;
        const double su = std::sin(2.0 * pi * theta_u), sl = std::sin(2.0 * pi * theta_l);
        a_u = su * su;
        a_l = sl * sl;
    }
    IqaeResult r;
    r.lower = std::min(a_l, a_u);
    r.upper = std::max(a_l, a_u);
    r.a_hat = 0.5 * (r.lower + r.upper);
    r.calls = oracle.grover_calls - start_calls;
    r.rounds = hits_per_round.size();
    return r;
}

}  // namespace hqc
