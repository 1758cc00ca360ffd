#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hqc/parallel.hpp"
#include "hqc/payoff.hpp"
#include "hqc/rng.hpp"
#include "hqc/schemes.hpp"

namespace hqc {

struct PriceEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    bool discounted = true;
    double clamp_rate = 0.0;  // fraction of steps started from negative variance
};

struct PayoffSample {
    std::vector<double> payoffs;  // undiscounted, one per path
    std::uint64_t clamps = 0;
};

/// Simulates n_paths paths; path i draws from stream i of `seed`.
inline PayoffSample simulate_payoffs(const OptionSpec& spec, const HestonParams& params, Scheme scheme,
                                     const TimeGrid& grid, std::uint64_t n_paths, std::uint64_t seed) {
    spec.validate();
    grid.validate();
    if (n_paths == 0) throw std::invalid_argument("paths: must be at least 1");
    PayoffSample out;
    out.payoffs.assign(n_paths, 0.0);
    std::vector<std::uint64_t> clamps(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(seed, i);
            PathSummary ps;
            clamps[i] = walk_path(scheme, params, grid, rng, [&](std::uint32_t j, const PathState& s) {
                if (j > 0) ps.add(params.s0 * std::exp(s.y1));
            });
            out.payoffs[i] = payoff_from_summary(spec, ps);
        }
    });
    for (auto c : clamps) out.clamps += c;
    return out;
}

inline PriceEstimate summarize(const std::vector<double>& payoffs, double discount, std::uint64_t clamps,
                               std::uint64_t steps_per_path) {
    const std::size_t n = payoffs.size();
    const long double mean = pairwise_sum(payoffs.data(), n) / static_cast<long double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = payoffs[i] - mean;
        sq[i] = static_cast<double>(d * d);
    }
    const long double var = n > 1 ? pairwise_sum(sq.data(), n) / static_cast<long double>(n - 1) : 0.0L;
    PriceEstimate est;
    est.mean = discount * static_cast<double>(mean);
    est.std_error = discount * std::sqrt(static_cast<double>(var) / static_cast<double>(n));
    est.n_paths = n;
    est.discounted = true;
    est.clamp_rate = static_cast<double>(clamps) / static_cast<double>(n * steps_per_path);
    return est;
}

inline PriceEstimate price(const OptionSpec& spec, const HestonParams& params, Scheme scheme, const TimeGrid& grid,
                           std::uint64_t n_paths, std::uint64_t seed) {
    const PayoffSample s = simulate_payoffs(spec, params, scheme, grid, n_paths, seed);
    return summarize(s.payoffs, std::exp(-params.r * grid.t_end), s.clamps, grid.n_steps);
}

struct ConvergenceRow {
    Scheme scheme = Scheme::strong_euler;
    std::uint32_t n_steps = 0;
    PriceEstimate estimate;
    double deviation = 0.0;  // mean minus baseline mean
};

inline std::uint64_t study_seed(std::uint64_t seed, Scheme scheme, std::uint32_t n_steps) noexcept {
    return derive_seed(seed, (static_cast<std::uint64_t>(scheme) << 32) | n_steps);
}

/// One row per (scheme, N). The baseline is strong Euler at the largest N
/// when strong Euler is among the schemes, else the first scheme at that N.
inline std::vector<ConvergenceRow> convergence_study(const OptionSpec& spec, const HestonParams& params,
                                                     const std::vector<Scheme>& schemes,
                                                     const std::vector<std::uint32_t>& n_list,
                                                     std::uint64_t n_paths, std::uint64_t seed) {
    if (schemes.empty()) throw std::invalid_argument("schemes: must not be empty");
    if (n_list.empty()) throw std::invalid_argument("n_list: must not be empty");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("n_list: must be strictly ascending");
    }
    std::vector<ConvergenceRow> rows;
    for (Scheme s : schemes) {
        for (std::uint32_t n : n_list) {
            ConvergenceRow row;
            row.scheme = s;
            row.n_steps = n;
            row.estimate = price(spec, params, s, TimeGrid{spec.expiry, n}, n_paths, study_seed(seed, s, n));
            rows.push_back(row);
        }
    }
    Scheme base = schemes.front();
    for (Scheme s : schemes) {
        if (s == Scheme::strong_euler) base = s;
    }
    double baseline = 0.0;
    for (const auto& row : rows) {
        if (row.scheme == base && row.n_steps == n_list.back()) baseline = row.estimate.mean;
    }
    for (auto& row : rows) row.deviation = row.estimate.mean - baseline;
    return rows;
}

struct ZEstimate {
    double z = 0.0;
    double max_payoff = 0.0;
    bool degenerate = false;  // every sampled payoff was zero
};

// Returned when no sampled path pays anything.
inline constexpr double kZFloor = 0.01;

/// Maximum raw payoff over simulated paths, rounded up to two significant figures.
inline ZEstimate estimate_z(const OptionSpec& spec, const HestonParams& params, Scheme scheme, const TimeGrid& grid,
                            std::uint64_t n_paths, std::uint64_t seed) {
    const PayoffSample s = simulate_payoffs(spec, params, scheme, grid, n_paths, seed);
    ZEstimate out;
    for (double v : s.payoffs) out.max_payoff = std::max(out.max_payoff, v);
    if (out.max_payoff > 0.0) {
        out.z = ceil_two_sig(out.max_payoff);
    } else {
        out.z = kZFloor;
        out.degenerate = true;
    }
    return out;
}

}  // namespace hqc
