#pragma once

// (M, d)-piecewise polynomial approximants: M equal-width pieces, each a
// degree-d polynomial obtained by Chebyshev interpolation. Coefficients are
// monomials in the offset u = x - left edge of the piece; keeping u small
// stops coefficient rounding from being amplified by large powers of x.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hqc/costs.hpp"
#include "hqc/fixedpoint.hpp"

namespace hqc {

struct PiecewisePoly {
    double lo = 0.0;
    double hi = 1.0;
    int m = 1;
    int d = 0;
    std::vector<std::vector<double>> coeffs;  // coeffs[i][k] multiplies u^k on piece i
    double sup_error = 0.0;

    double width() const noexcept { return (hi - lo) / m; }

    /// Piece holding x; points outside the domain use the nearest edge piece.
    int piece(double x) const noexcept {
        const double t = std::floor((x - lo) / width());
        if (!(t > 0.0)) return 0;
        return t >= m ? m - 1 : static_cast<int>(t);
    }

    double left(int i) const noexcept { return lo + i * width(); }

    double operator()(double x) const noexcept {
        const int i = piece(x);
        const auto& c = coeffs[i];
        const long double u = static_cast<long double>(x) - left(i);
        long double acc = c[d];
        for (int k = d - 1; k >= 0; --k) acc = acc * u + c[k];
        return static_cast<double>(acc);
    }

    /// Circuit semantics: piece chosen by comparison with the grid
    /// breakpoints, offset subtracted, then Horner with floor-rounded
    /// products.
    FixedValue eval_fixed(const FixedValue& x) const {
        int i = 0;
        for (int b = 1; b < m; ++b) {
            if (fx_compare_const(x, lo + b * width())) i = b;
        }
        const auto& c = coeffs[i];
        const FixedValue u = fx_sub(x, quantize(left(i), x.fmt));
        FixedValue acc = quantize(c[d], x.fmt);
        for (int k = d - 1; k >= 0; --k) acc = fx_add(fx_mul(acc, u), quantize(c[k], x.fmt));
        return acc;
    }

    ResourceCost cost(const FixedFormat& fmt) const {
        return cost_primitive(Primitive::ppoly, fmt.n, fmt.p, m, d);
    }
};

namespace detail {

/// Degree-d Chebyshev interpolant of f on [l, r], as monomials in x - l.
inline std::vector<double> chebyshev_piece(const std::function<double(double)>& f, double l, double r, int d) {
    const int nodes = d + 1;
    const long double mid = 0.5L * (static_cast<long double>(l) + r);
    const long double half = 0.5L * (static_cast<long double>(r) - l);
    std::vector<long double> fv(nodes), cheb(nodes, 0.0L);
    for (int k = 0; k < nodes; ++k) {
        const long double t = std::cos(std::numbers::pi_v<long double> * (k + 0.5L) / nodes);
        fv[k] = f(static_cast<double>(mid + half * t));
    }
    for (int j = 0; j < nodes; ++j) {
        long double s = 0.0L;
        for (int k = 0; k < nodes; ++k) {
            s += fv[k] * std::cos(std::numbers::pi_v<long double> * j * (k + 0.5L) / nodes);
        }
        cheb[j] = 2.0L * s / nodes;
    }
    cheb[0] *= 0.5L;

    // Chebyshev basis -> monomials in t.
    std::vector<std::vector<long double>> basis(nodes, std::vector<long double>(nodes, 0.0L));
    basis[0][0] = 1.0L;
    if (nodes > 1) basis[1][1] = 1.0L;
    for (int j = 2; j < nodes; ++j) {
        for (int k = 0; k + 1 < nodes; ++k) basis[j][k + 1] += 2.0L * basis[j - 1][k];
        for (int k = 0; k < nodes; ++k) basis[j][k] -= basis[j - 2][k];
    }
    std::vector<long double> in_t(nodes, 0.0L);
    for (int j = 0; j < nodes; ++j) {
        for (int k = 0; k < nodes; ++k) in_t[k] += cheb[j] * basis[j][k];
    }

    // t = a u - 1 with u = x - l.
    const long double a = 1.0L / half;
    const long double b = -1.0L;
    std::vector<long double> in_u(nodes, 0.0L);
    std::vector<long double> power(nodes, 0.0L);  // (a u + b)^k
    power[0] = 1.0L;
    for (int k = 0; k < nodes; ++k) {
        for (int i = 0; i <= k; ++i) in_u[i] += in_t[k] * power[i];
        for (int i = k + 1; i >= 1; --i) {
            if (i < nodes) power[i] = power[i] * b + power[i - 1] * a;
        }
        power[0] *= b;
    }
    return std::vector<double>(in_u.begin(), in_u.end());
}

inline double measured_error(const PiecewisePoly& pp, const std::function<double(double)>& f, int samples) {
    double worst = 0.0;
    const double w = pp.width();
    for (int i = 0; i < pp.m; ++i) {
        const double l = pp.lo + i * w;
        for (int s = 0; s < samples; ++s) {
            double x = l + w * s / (samples - 1);
            if (i == pp.m - 1 && s == samples - 1) x = pp.hi;
            worst = std::max(worst, std::fabs(pp(x) - f(x)));
        }
    }
    return worst;
}

}  // namespace detail

inline PiecewisePoly fit_piecewise(const std::function<double(double)>& f, double lo, double hi, int m, int d,
                                   int samples_per_piece = 10000) {
    if (!(hi > lo)) throw std::invalid_argument("domain: need lo < hi");
    if (m < 1 || d < 0) throw std::invalid_argument("piecewise poly: need m >= 1 and d >= 0");
    PiecewisePoly pp;
    pp.lo = lo;
    pp.hi = hi;
    pp.m = m;
    pp.d = d;
    const double w = (hi - lo) / m;
    for (int i = 0; i < m; ++i) pp.coeffs.push_back(detail::chebyshev_piece(f, lo + i * w, lo + (i + 1) * w, d));
    pp.sup_error = detail::measured_error(pp, f, std::max(samples_per_piece, 2));
    return pp;
}

struct FitSearch {
    int max_degree = 8;
    int max_pieces = 1 << 14;
    int search_samples = 1000;   // per piece, while searching
    int verify_samples = 10000;  // per piece, for the chosen fit
};

/// Cheapest (M, d) in the search grid whose verified sup error is at most
/// eps, ranked by the piecewise-polynomial T-count in format fmt.
inline PiecewisePoly build_piecewise_poly(const std::function<double(double)>& f, double lo, double hi, double eps,
                                          const FixedFormat& fmt, const FitSearch& search = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps: must be positive");
    PiecewisePoly best;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    for (int d = 0; d <= search.max_degree; ++d) {
        for (int m = 1; m <= search.max_pieces; m *= 2) {
            const std::int64_t cost = cost_primitive(Primitive::ppoly, fmt.n, fmt.p, m, d).t_count;
            if (cost >= best_cost) break;
            PiecewisePoly cand = fit_piecewise(f, lo, hi, m, d, search.search_samples);
            if (cand.sup_error > eps) continue;
            cand.sup_error = detail::measured_error(cand, f, search.verify_samples);
            if (cand.sup_error > eps) continue;
            best = std::move(cand);
            best_cost = cost;
            break;
        }
    }
    if (best.coeffs.empty()) {
        throw std::runtime_error("piecewise poly: eps " + std::to_string(eps) + " unreachable within search bounds");
    }
    return best;
}

enum class TargetFunction { exp, arcsin };

inline std::function<double(double)> target_function(TargetFunction t) {
    if (t == TargetFunction::exp) return [](double x) { return std::exp(x); };
    return [](double x) { return std::asin(x); };
}

}  // namespace hqc
