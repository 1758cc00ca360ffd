#pragma once

// Two's-complement fixed-point numbers S_{n,p}: n bits in total, p of them
// (sign included) in front of the binary point. A value is raw * 2^(p-n)
// with raw in [-2^(n-1), 2^(n-1)). Rounding is always floor, matching the
// bar operator used by the circuit cost model.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hqc {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

class FixedPointOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

struct FixedFormat {
    int n = 32;
    int p = 8;

    int frac_bits() const noexcept { return n - p; }
    std::int64_t raw_min() const noexcept { return -(std::int64_t{1} << (n - 1)); }
    std::int64_t raw_max() const noexcept { return (std::int64_t{1} << (n - 1)) - 1; }
    double ulp() const noexcept { return std::ldexp(1.0, p - n); }
    double lower() const noexcept { return -std::ldexp(1.0, p - 1); }
    double upper() const noexcept { return std::ldexp(1.0, p - 1); }  // exclusive

    void validate() const {
        if (n < 2 || n > 62) throw std::invalid_argument("n: must lie in [2, 62]");
        if (p < 1 || p > n) throw std::invalid_argument("p: must lie in [1, n]");
    }
    friend bool operator==(const FixedFormat&, const FixedFormat&) = default;
};

struct FixedValue {
    std::int64_t raw = 0;
    FixedFormat fmt;

    double value() const noexcept { return std::ldexp(static_cast<double>(raw), fmt.p - fmt.n); }
};

namespace detail {

inline FixedValue checked(i128 raw, const FixedFormat& fmt, const char* op) {
    if (raw < fmt.raw_min() || raw > fmt.raw_max()) {
        throw FixedPointOverflow(std::string(op) + ": result outside S(" + std::to_string(fmt.n) + "," +
                                 std::to_string(fmt.p) + ")");
    }
    return {static_cast<std::int64_t>(raw), fmt};
}

inline void same_format(const FixedValue& a, const FixedValue& b, const char* op) {
    if (!(a.fmt == b.fmt)) throw std::invalid_argument(std::string(op) + ": operand formats differ");
}

inline u128 isqrt(u128 v) noexcept {
    if (v == 0) return 0;
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace detail

/// Largest grid value not exceeding x.
inline FixedValue quantize(double x, const FixedFormat& fmt) {
    if (!std::isfinite(x) || x < fmt.lower() || x >= fmt.upper()) {
        throw FixedPointOverflow("quantize: " + std::to_string(x) + " outside S(" + std::to_string(fmt.n) + "," +
                                 std::to_string(fmt.p) + ")");
    }
    const double scaled = std::floor(std::ldexp(x, fmt.frac_bits()));
    return detail::checked(static_cast<i128>(scaled), fmt, "quantize");
}

inline FixedValue from_raw(std::int64_t raw, const FixedFormat& fmt) { return detail::checked(raw, fmt, "from_raw"); }

inline FixedValue fx_add(const FixedValue& a, const FixedValue& b) {
    detail::same_format(a, b, "fx_add");
    return detail::checked(static_cast<i128>(a.raw) + b.raw, a.fmt, "fx_add");
}

inline FixedValue fx_sub(const FixedValue& a, const FixedValue& b) {
    detail::same_format(a, b, "fx_sub");
    return detail::checked(static_cast<i128>(a.raw) - b.raw, a.fmt, "fx_sub");
}

/// floor(a*b) on the grid. The arithmetic right shift of a signed product
/// rounds toward minus infinity.
inline FixedValue fx_mul(const FixedValue& a, const FixedValue& b) {
    detail::same_format(a, b, "fx_mul");
    const i128 prod = static_cast<i128>(a.raw) * b.raw;
    return detail::checked(prod >> a.fmt.frac_bits(), a.fmt, "fx_mul");
}

/// Multiplication by a classical constant; c is quantized into the same format first.
inline FixedValue fx_mul_const(const FixedValue& a, double c) { return fx_mul(a, quantize(c, a.fmt)); }

inline FixedValue fx_sqrt(const FixedValue& a) {
    if (a.raw < 0) throw std::domain_error("fx_sqrt: negative operand");
    const u128 shifted = static_cast<u128>(a.raw) << a.fmt.frac_bits();
    return detail::checked(static_cast<i128>(detail::isqrt(shifted)), a.fmt, "fx_sqrt");
}

/// 1 iff a >= c, with c already on the grid.
inline bool fx_compare_const(const FixedValue& a, const FixedValue& c) {
    detail::same_format(a, c, "fx_compare_const");
    return a.raw >= c.raw;
}

inline bool fx_compare_const(const FixedValue& a, double c) { return fx_compare_const(a, quantize(c, a.fmt)); }

}  // namespace hqc
