#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "hqc/model.hpp"
#include "hqc/normal.hpp"
#include "hqc/rng.hpp"

namespace hqc {

enum class Scheme { strong_euler, weak_euler, weak_taylor2 };

inline constexpr std::array<Scheme, 3> kAllSchemes{Scheme::strong_euler, Scheme::weak_euler, Scheme::weak_taylor2};

inline std::string_view scheme_name(Scheme s) noexcept {
    switch (s) {
        case Scheme::strong_euler: return "strong-euler";
        case Scheme::weak_euler: return "weak-euler";
        case Scheme::weak_taylor2: return "weak-taylor2";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    if (name == "strong-euler") return Scheme::strong_euler;
    if (name == "weak-euler") return Scheme::weak_euler;
    if (name == "weak-taylor2") return Scheme::weak_taylor2;
    throw std::invalid_argument("scheme: unknown name '" + std::string(name) + "'");
}

struct TimeGrid {
    double t_end = 1.0;
    std::uint32_t n_steps = 1;

    double h() const noexcept { return t_end / n_steps; }
    void validate() const {
        if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("expiry: must be positive");
        if (n_steps < 1) throw std::invalid_argument("n_steps: must be at least 1");
    }
};

struct StrongEulerIncrement {
    double z1 = 0.0;  // standard normals
    double z2 = 0.0;
};

struct WeakEulerIncrement {
    int s1 = 1;  // +1 or -1
    int s2 = 1;
};

struct WeakTaylor2Increment {
    double w1 = 0.0;  // in {-sqrt(3h), 0, +sqrt(3h)}
    double w2 = 0.0;
    double v12 = 0.0;  // +-h
};

using Increments = std::variant<StrongEulerIncrement, WeakEulerIncrement, WeakTaylor2Increment>;

// Floor for the nu^{-1/2} factors in the weak Taylor operator terms.
inline constexpr double kNuMin = 1e-12;

namespace detail {

inline PathState euler_update(const PathState& s, const HestonParams& p, double h, double dw1, double dw2) {
    const SdeCoefficients c = coefficients(p, s);
    return {s.y1 + c.a1 * h + c.b11 * dw1 + c.b12 * dw2, s.y2 + c.a2 * h + c.b21 * dw1};
}

}  // namespace detail

inline PathState step_strong_euler(const PathState& s, const HestonParams& p, double h,
                                   const StrongEulerIncrement& z) {
    const double sh = std::sqrt(h);
    return detail::euler_update(s, p, h, z.z1 * sh, z.z2 * sh);
}

inline PathState step_weak_euler(const PathState& s, const HestonParams& p, double h, const WeakEulerIncrement& sg) {
    const double sh = std::sqrt(h);
    return detail::euler_update(s, p, h, sg.s1 * sh, sg.s2 * sh);
}

inline PathState step_weak_taylor2(const PathState& s, const HestonParams& p, double h,
                                   const WeakTaylor2Increment& inc) {
    const double nu = s.y2;
    const SdeCoefficients c = coefficients(p, s);
    const double sq = std::sqrt(std::max(nu, 0.0));
    const double inv_s = 1.0 / std::sqrt(std::max(nu, kNuMin));
    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
    const double gap = p.theta - nu;

    const double l0_a1 = -0.5 * p.kappa * gap;
    const double l0_a2 = -p.kappa * p.kappa * gap;
    const double l0_b11 = (0.5 * p.rho * p.kappa * gap - 0.125 * p.rho * p.xi * p.xi) * inv_s;
    const double l0_b12 = (0.5 * rho_c * p.kappa * gap - 0.125 * rho_c * p.xi * p.xi) * inv_s;
    const double l0_b21 = (0.5 * p.xi * p.kappa * gap - 0.125 * p.xi * p.xi * p.xi) * inv_s;
    const double l1_a1 = -0.5 * p.xi * sq;
    const double l1_a2 = -p.kappa * p.xi * sq;
    const double l1_b11 = 0.5 * p.rho * p.xi;
    const double l1_b12 = 0.5 * rho_c * p.xi;
    const double l1_b21 = 0.5 * p.xi * p.xi;

    const double w1 = inc.w1;
    const double w2 = inc.w2;
    const double hh = 0.5 * h * h;
    PathState out;
    out.y1 = s.y1 + c.a1 * h + c.b11 * w1 + c.b12 * w2 + l0_a1 * hh +
             0.5 * h * ((l0_b11 + l1_a1) * w1 + l0_b12 * w2) + 0.5 * l1_b11 * (w1 * w1 - h) +
             0.5 * l1_b12 * (w1 * w2 + inc.v12);
    out.y2 = s.y2 + c.a2 * h + c.b21 * w1 + l0_a2 * hh + 0.5 * h * (l0_b21 + l1_a2) * w1 +
             0.5 * l1_b21 * (w1 * w1 - h);
    return out;
}

inline PathState step(const PathState& s, const HestonParams& p, double h, const Increments& inc) {
    return std::visit(
        [&](const auto& x) -> PathState {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, StrongEulerIncrement>) return step_strong_euler(s, p, h, x);
            else if constexpr (std::is_same_v<T, WeakEulerIncrement>) return step_weak_euler(s, p, h, x);
            else return step_weak_taylor2(s, p, h, x);
        },
        inc);
}

inline StrongEulerIncrement sample_strong(CounterRng& rng) noexcept {
    const double z1 = normal_inv_cdf(rng.uniform());
    return {z1, normal_inv_cdf(rng.uniform())};
}

inline WeakEulerIncrement sample_weak(CounterRng& rng) noexcept {
    const std::uint64_t bits = rng.next_u64();
    return {(bits >> 63) ? 1 : -1, ((bits >> 62) & 1u) ? 1 : -1};
}

inline WeakTaylor2Increment sample_taylor2(CounterRng& rng, double h) noexcept {
    const double jump = std::sqrt(3.0 * h);
    auto three_point = [&](double u) { return u < 1.0 / 6.0 ? -jump : (u < 5.0 / 6.0 ? 0.0 : jump); };
    WeakTaylor2Increment inc;
    inc.w1 = three_point(rng.uniform());
    inc.w2 = three_point(rng.uniform());
    inc.v12 = (rng.next_u64() >> 63) ? h : -h;
    return inc;
}

inline Increments sample_increments(Scheme scheme, double h, CounterRng& rng) noexcept {
    switch (scheme) {
        case Scheme::strong_euler: return sample_strong(rng);
        case Scheme::weak_euler: return sample_weak(rng);
        case Scheme::weak_taylor2: return sample_taylor2(rng, h);
    }
    return StrongEulerIncrement{};
}

/// Runs one path from (0, nu0), calling visit(j, state) for j = 0..N.
/// Returns the number of steps started from negative variance.
template <class Visit>
std::uint64_t walk_path(Scheme scheme, const HestonParams& p, const TimeGrid& grid, CounterRng& rng, Visit&& visit) {
    const double h = grid.h();
    PathState s{0.0, p.nu0};
    std::uint64_t clamps = 0;
    visit(0u, s);
    for (std::uint32_t j = 1; j <= grid.n_steps; ++j) {
        if (s.y2 < 0.0) ++clamps;
        switch (scheme) {
            case Scheme::strong_euler: s = step_strong_euler(s, p, h, sample_strong(rng)); break;
            case Scheme::weak_euler: s = step_weak_euler(s, p, h, sample_weak(rng)); break;
            case Scheme::weak_taylor2: s = step_weak_taylor2(s, p, h, sample_taylor2(rng, h)); break;
        }
        visit(j, s);
    }
    return clamps;
}

struct GeneratedPath {
    std::vector<PathState> states;  // N + 1 entries
    std::uint64_t clamp_count = 0;
};

inline GeneratedPath generate_path(Scheme scheme, const HestonParams& p, const TimeGrid& grid, CounterRng& rng) {
    grid.validate();
    GeneratedPath out;
    out.states.reserve(grid.n_steps + 1);
    out.clamp_count =
        walk_path(scheme, p, grid, rng, [&](std::uint32_t, const PathState& s) { out.states.push_back(s); });
    return out;
}

}  // namespace hqc
