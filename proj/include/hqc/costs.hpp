#pragma once

// Clifford+T costs of the fixed-point arithmetic primitives.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hqc {

struct ResourceCost {
    std::int64_t t_count = 0;
    std::int64_t t_depth = 0;
    std::int64_t ancilla = 0;

    /// Sequential composition: gate counts add, the ancilla pool is reused.
    ResourceCost& operator+=(const ResourceCost& o) noexcept {
        t_count += o.t_count;
        t_depth += o.t_depth;
        ancilla = std::max(ancilla, o.ancilla);
        return *this;
    }
    friend ResourceCost operator+(ResourceCost a, const ResourceCost& b) noexcept { return a += b; }

    /// k sequential repetitions.
    friend ResourceCost operator*(std::int64_t k, const ResourceCost& c) noexcept {
        if (k <= 0) return {};
        return {k * c.t_count, k * c.t_depth, c.ancilla};
    }
    friend bool operator==(const ResourceCost&, const ResourceCost&) = default;
};

enum class Primitive {
    toffoli_jones,
    toffoli_amy,
    add,
    sub,
    c_add,
    c_sub,
    add_const,
    sub_const,
    comp_const,
    mul,
    mul_const,
    sqrt,
    ppoly,
    exp,
    arcsin_sqrt,
};

inline constexpr Primitive kAllPrimitives[] = {
    Primitive::toffoli_jones, Primitive::toffoli_amy, Primitive::add,        Primitive::sub,
    Primitive::c_add,         Primitive::c_sub,       Primitive::add_const,  Primitive::sub_const,
    Primitive::comp_const,    Primitive::mul,         Primitive::mul_const,  Primitive::sqrt,
    Primitive::ppoly,         Primitive::exp,         Primitive::arcsin_sqrt,
};

inline std::string_view primitive_name(Primitive k) noexcept {
    switch (k) {
        case Primitive::toffoli_jones: return "toffoli_jones";
        case Primitive::toffoli_amy: return "toffoli_amy";
        case Primitive::add: return "add";
        case Primitive::sub: return "sub";
        case Primitive::c_add: return "c_add";
        case Primitive::c_sub: return "c_sub";
        case Primitive::add_const: return "add_const";
        case Primitive::sub_const: return "sub_const";
        case Primitive::comp_const: return "comp_const";
        case Primitive::mul: return "mul";
        case Primitive::mul_const: return "mul_const";
        case Primitive::sqrt: return "sqrt";
        case Primitive::ppoly: return "ppoly";
        case Primitive::exp: return "exp";
        case Primitive::arcsin_sqrt: return "arcsin_sqrt";
    }
    return "?";
}

inline Primitive parse_primitive(std::string_view name) {
    for (Primitive k : kAllPrimitives) {
        if (primitive_name(k) == name) return k;
    }
    throw std::invalid_argument("primitive: unknown kind '" + std::string(name) + "'");
}

inline std::int64_t ceil_log2(std::int64_t m) noexcept {
    std::int64_t r = 0;
    while ((std::int64_t{1} << r) < m) ++r;
    return r;
}

inline std::int64_t ceil_half(std::int64_t n) noexcept { return (n + 1) / 2; }

namespace detail {

// Interval-selection term ceil(log2 M) - 1; a single interval needs none.
inline std::int64_t select_bits(std::int64_t m) noexcept { return std::max<std::int64_t>(ceil_log2(m) - 1, 0); }

inline ResourceCost ppoly_cost(std::int64_t n, std::int64_t p, std::int64_t m, std::int64_t d) noexcept {
    const std::int64_t lg = select_bits(m);
    ResourceCost c;
    c.t_count = 8 * d * (n * n - n + 2 * p * n - 2 * p * p + 2 * p - 1) + 32 * m * (n - 2) + 16 * d * m * lg;
    c.t_depth = 4 * d * std::max(n * n - 2 * n + 2 * p * n - 2 * p * p + 2 * p, m * lg) + 16 * m * (n - 2) +
                4 * d * (n - 1);
    c.ancilla = (d + 4) * n + 2 * ceil_log2(m);
    return c;
}

}  // namespace detail

/// Evaluates one row of the primitive cost table. m and d are the number of
/// polynomial pieces and their degree, required for ppoly, exp and arcsin_sqrt.
inline ResourceCost cost_primitive(Primitive kind, std::int64_t n, std::int64_t p = 0,
                                   std::optional<std::int64_t> m = std::nullopt,
                                   std::optional<std::int64_t> d = std::nullopt) {
    if (n < 1) throw std::invalid_argument("n: must be at least 1");
    const std::int64_t mul_core = n * n - 2 * n + 2 * p * n - 2 * p * p + 2 * p;
    switch (kind) {
        case Primitive::toffoli_jones: return {4 * n - 8, n - 2, n - 1};
        case Primitive::toffoli_amy:
            if (n < 5) throw std::invalid_argument("toffoli_amy: needs n >= 5");
            return {16 * n - 60, 16 * n - 60, 1};
        case Primitive::add:
        case Primitive::sub: return {4 * n - 4, 2 * n - 2, n - 1};
        case Primitive::c_add:
        case Primitive::c_sub: return {8 * n - 4, 4 * n - 2, 2 * n - 1};
        case Primitive::add_const:
        case Primitive::sub_const: return {4 * n - 8, 2 * n - 4, 2 * n - 2};
        case Primitive::comp_const: return {8 * n - 16, 4 * n - 8, 3 * n - 2};
        case Primitive::mul: return {4 * mul_core, 2 * mul_core, 2 * n - 1};
        case Primitive::mul_const: {
            const std::int64_t core = n * n - 3 * n + 2 * p * n - 2 * p * p + 2 * p;
            return {2 * core, core, n - 1};
        }
        case Primitive::sqrt: {
            const std::int64_t c = ceil_half(n);
            return {8 * c * c + 32 * c - 8, 4 * c * c + 16 * c - 4, (7 * n + 1) / 2};
        }
        case Primitive::ppoly:
        case Primitive::exp:
        case Primitive::arcsin_sqrt: {
            if (!m || !d) throw std::invalid_argument(std::string(primitive_name(kind)) + ": needs (m, d)");
            if (*m < 1 || *d < 0) throw std::invalid_argument("m must be >= 1 and d >= 0");
            const ResourceCost pp = detail::ppoly_cost(n, p, *m, *d);
            if (kind != Primitive::arcsin_sqrt) return pp;
            const std::int64_t c = ceil_half(n);
            return {2 * pp.t_count + 16 * c * c + 48 * n + 64 * c - 64,
                    2 * pp.t_depth + 8 * c * c + 24 * n + 32 * c - 32, pp.ancilla + 3 * n + 1};
        }
    }
    throw std::invalid_argument("primitive: unknown kind");
}

}  // namespace hqc
