#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hqc {

enum class OptionKind {
    asian_call,
    asian_put,
    up_and_in_call,
    up_and_out_call,
    down_and_in_call,
    down_and_out_call,
    up_and_in_put,
    up_and_out_put,
    down_and_in_put,
    down_and_out_put,
};

inline constexpr OptionKind kAllOptionKinds[] = {
    OptionKind::asian_call,      OptionKind::asian_put,        OptionKind::up_and_in_call,
    OptionKind::up_and_out_call, OptionKind::down_and_in_call, OptionKind::down_and_out_call,
    OptionKind::up_and_in_put,   OptionKind::up_and_out_put,   OptionKind::down_and_in_put,
    OptionKind::down_and_out_put,
};

inline std::string_view option_kind_name(OptionKind k) noexcept {
    switch (k) {
        case OptionKind::asian_call: return "asian-call";
        case OptionKind::asian_put: return "asian-put";
        case OptionKind::up_and_in_call: return "up-and-in-call";
        case OptionKind::up_and_out_call: return "up-and-out-call";
        case OptionKind::down_and_in_call: return "down-and-in-call";
        case OptionKind::down_and_out_call: return "down-and-out-call";
        case OptionKind::up_and_in_put: return "up-and-in-put";
        case OptionKind::up_and_out_put: return "up-and-out-put";
        case OptionKind::down_and_in_put: return "down-and-in-put";
        case OptionKind::down_and_out_put: return "down-and-out-put";
    }
    return "?";
}

inline OptionKind parse_option_kind(std::string_view name) {
    for (OptionKind k : kAllOptionKinds) {
        if (option_kind_name(k) == name) return k;
    }
    throw std::invalid_argument("kind: unknown option kind '" + std::string(name) + "'");
}

inline bool is_asian(OptionKind k) noexcept { return k == OptionKind::asian_call || k == OptionKind::asian_put; }

inline bool is_call(OptionKind k) noexcept {
    switch (k) {
        case OptionKind::asian_call:
        case OptionKind::up_and_in_call:
        case OptionKind::up_and_out_call:
        case OptionKind::down_and_in_call:
        case OptionKind::down_and_out_call: return true;
        default: return false;
    }
}

struct OptionSpec {
    OptionKind kind = OptionKind::asian_call;
    double strike = 0.0;
    std::optional<double> barrier;  // may be +inf
    double expiry = 1.0;
    std::optional<double> z_bound;

    void validate() const {
        if (!(strike > 0.0) || !std::isfinite(strike)) throw std::invalid_argument("strike: must be positive");
        if (!(expiry > 0.0) || !std::isfinite(expiry)) throw std::invalid_argument("expiry: must be positive");
        if (is_asian(kind)) {
            if (barrier) throw std::invalid_argument("barrier: not allowed for Asian options");
        } else if (!barrier) {
            throw std::invalid_argument("barrier: required for barrier options");
        } else if (!(*barrier > 0.0)) {
            throw std::invalid_argument("barrier: must be positive");
        }
        if (z_bound && !(*z_bound > 0.0)) throw std::invalid_argument("z_bound: must be positive");
    }
};

/// Running statistics over the monitored prices S_1..S_N.
struct PathSummary {
    double sum = 0.0;
    double max = -std::numeric_limits<double>::infinity();
    double min = std::numeric_limits<double>::infinity();
    double last = 0.0;
    std::uint32_t count = 0;

    void add(double s) noexcept {
        sum += s;
        max = std::max(max, s);
        min = std::min(min, s);
        last = s;
        ++count;
    }
};

/// Barrier indicator with inclusive boundaries.
inline bool barrier_alive(OptionKind k, double barrier, double path_max, double path_min) noexcept {
    switch (k) {
        case OptionKind::up_and_in_call:
        case OptionKind::up_and_in_put: return path_max >= barrier;
        case OptionKind::up_and_out_call:
        case OptionKind::up_and_out_put: return path_max <= barrier;
        case OptionKind::down_and_in_call:
        case OptionKind::down_and_in_put: return path_min <= barrier;
        case OptionKind::down_and_out_call:
        case OptionKind::down_and_out_put: return path_min >= barrier;
        default: return true;
    }
}

inline double payoff_from_summary(const OptionSpec& spec, const PathSummary& ps) noexcept {
    const double underlying = is_asian(spec.kind) ? ps.sum / ps.count : ps.last;
    const double intrinsic = is_call(spec.kind) ? underlying - spec.strike : spec.strike - underlying;
    if (intrinsic <= 0.0) return 0.0;
    if (!is_asian(spec.kind) && !barrier_alive(spec.kind, *spec.barrier, ps.max, ps.min)) return 0.0;
    return intrinsic;
}

/// prices[0] is S0 and is not monitored.
inline double raw_payoff(const OptionSpec& spec, std::span<const double> prices) {
    if (prices.size() < 2) throw std::invalid_argument("raw_payoff: need at least two prices");
    PathSummary ps;
    for (std::size_t j = 1; j < prices.size(); ++j) ps.add(prices[j]);
    return payoff_from_summary(spec, ps);
}

/// Payoff divided by Z, written in log returns (R_0 = 0) as the quantum
/// circuit evaluates it. Values above 1 are clipped and counted.
inline double normalized_logreturn_payoff(const OptionSpec& spec, double s0, std::span<const double> logreturns,
                                          std::uint64_t* clip_counter = nullptr) {
    if (logreturns.size() < 2) throw std::invalid_argument("normalized_logreturn_payoff: need at least two points");
    if (!spec.z_bound) throw std::invalid_argument("z_bound: required for normalized payoff");
    const double z = *spec.z_bound;
    const std::size_t n = logreturns.size() - 1;
    const double k = spec.strike / z;
    double x;
    if (is_asian(spec.kind)) {
        const double c = s0 / (static_cast<double>(n) * z);
        double acc = 0.0;
        for (std::size_t j = 1; j <= n; ++j) acc += std::exp(logreturns[j]);
        x = is_call(spec.kind) ? c * acc - k : k - c * acc;
    } else {
        const double c = s0 / z;
        const double terminal = c * std::exp(logreturns[n]);
        x = is_call(spec.kind) ? terminal - k : k - terminal;
        if (x > 0.0) {
            const double level = std::log(*spec.barrier / s0);
            auto [lo, hi] = std::minmax_element(logreturns.begin() + 1, logreturns.end());
            if (!barrier_alive(spec.kind, level, *hi, *lo)) x = 0.0;
        }
    }
    if (x <= 0.0) return 0.0;
    if (x > 1.0) {
        if (clip_counter) ++*clip_counter;
        return 1.0;
    }
    return x;
}

/// Rounds x > 0 up to two significant figures.
inline double ceil_two_sig(double x) noexcept {
    if (!(x > 0.0)) return x;
    const double scale = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
    double q = std::ceil(x / scale - 1e-9);
    return q * scale;
}

}  // namespace hqc
