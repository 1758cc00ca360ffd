#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hqc/normal.hpp"

namespace hqc {

/// Gaussian restricted to the grid x_i = (-1 + 2i/M) * eta, i = 0..M-1,
/// with mass proportional to exp(-x_i^2 / 2).
class DiscreteGaussian {
public:
    DiscreteGaussian(std::uint64_t m_points, double eta) : m_(m_points), eta_(eta) {
        if (m_points < 2 || (m_points & (m_points - 1)) != 0) {
            throw std::invalid_argument("m_points: must be a power of two >= 2");
        }
        if (!(eta > 0.0)) throw std::invalid_argument("eta: must be positive");
        if (m_ <= kMaxTabulated) {
            long double s = 0.0L;
            for (std::uint64_t i = 0; i < m_; ++i) s += weight(i);
            z_ = static_cast<double>(s);
        }
    }

    // Larger supports are only used through sample_coupled.
    static constexpr std::uint64_t kMaxTabulated = std::uint64_t{1} << 24;

    std::uint64_t size() const noexcept { return m_; }
    double eta() const noexcept { return eta_; }
    double spacing() const noexcept { return 2.0 * eta_ / static_cast<double>(m_); }

    double support(std::uint64_t i) const noexcept {
        return (-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m_)) * eta_;
    }

    double weight(std::uint64_t i) const noexcept {
        const double x = support(i);
        return std::exp(-0.5 * x * x);
    }

    /// Normalizer Z, summed directly at construction.
    double normalizer() const {
        if (m_ > kMaxTabulated) throw std::length_error("discrete gaussian: support too large to tabulate");
        return z_;
    }

    double mass(std::uint64_t i) const { return weight(i) / normalizer(); }

    std::vector<double> masses() const {
        std::vector<double> out(m_);
        for (std::uint64_t i = 0; i < m_; ++i) out[i] = mass(i);
        return out;
    }

    double mean() const { return moment(1); }
    double variance() const {
        const double mu = mean();
        return moment(2) - mu * mu;
    }

    /// Maps a uniform u to a grid point by snapping the standard-normal
    /// quantile (clamped to the support) to the nearest x_i. For large M
    /// this is the inverse-cdf coupling of the discrete law with N(0, 1);
    /// the mismatch per draw is at most half a grid spacing.
    double sample_coupled(double u) const noexcept { return support(coupled_index(normal_inv_cdf(u))); }

    std::uint64_t coupled_index(double z) const noexcept {
        const double t = (z / eta_ + 1.0) * 0.5 * static_cast<double>(m_);
        const double idx = std::clamp(std::nearbyint(t), 0.0, static_cast<double>(m_ - 1));
        return static_cast<std::uint64_t>(idx);
    }

private:
    double moment(int k) const {
        long double s = 0.0L;
        for (std::uint64_t i = 0; i < m_; ++i) s += std::pow(static_cast<long double>(support(i)), k) * weight(i);
        return static_cast<double>(s / normalizer());
    }

    std::uint64_t m_;
    double eta_;
    double z_ = 0.0;
};

}  // namespace hqc
