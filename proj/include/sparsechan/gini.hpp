// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "sparsechan/types.hpp"

namespace sparsechan {

namespace detail {

/// Gini index of an ascending positive vector:
///
///   G = 1 - 2 * sum_i (p_i / |p|_1) * (R - i + 1/2) / R,   i = 1..R
///
/// G = 0 for equal powers, G -> 1 - 1/R when one ray carries everything.
/// Values may drift below 0 or above 1 by floating-point dust only; anything
/// past 1e-12 indicates a broken input and throws.
inline double gini_sorted(const Eigen::ArrayXd& ascending) {
    const Eigen::Index n = ascending.size();
    if (n == 0) throw std::invalid_argument("empty power vector");
    const double r = static_cast<double>(n);
    const double l1 = ascending.sum();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        acc += ascending[i] * (r - static_cast<double>(i) - 0.5);
    double g = 1.0 - 2.0 * acc / (r * l1);
    if (g < 0.0) {
        if (g < -1e-12) throw std::logic_error("gini below 0 beyond rounding");
        g = 0.0;
    } else if (g > 1.0) {
        if (g > 1.0 + 1e-12) throw std::logic_error("gini above 1 beyond rounding");
        g = 1.0;
    }
    return g;
}

}  // namespace detail

inline double gini(const PowerVector& v) { return detail::gini_sorted(v.values()); }

/// Expression-friendly overload: accepts any dense Eigen expression of
/// positive powers in any order; sorting happens internally.
template <typename Derived>
double gini(const Eigen::DenseBase<Derived>& powers) {
    Eigen::ArrayXd p(powers.size());
    Eigen::Index k = 0;
    for (Eigen::Index c = 0; c < powers.cols(); ++c)
        for (Eigen::Index r = 0; r < powers.rows(); ++r)
            p[k++] = static_cast<double>(powers.derived().coeff(r, c));
    return gini(PowerVector(p));
}

inline double gini(const std::vector<double>& powers) { return gini(PowerVector(powers)); }

/// Stable ascending sort of a positive power list; ties keep input order.
inline PowerVector sort_ascending(const std::vector<double>& powers) {
    return PowerVector(powers);
}

/// Gini of one realization. with_los uses every ray; without_los drops the
/// flagged LoS ray (the identified specular path, never just the strongest
/// ray). Needs at least two rays after removal.
inline GiniSample gini_realization(const ChannelRealization& r, LosVariant variant,
                                   std::uint64_t drop_index = 0) {
    if (variant == LosVariant::without_los && !r.has_los)
        throw std::invalid_argument("realization has no LoS ray to remove");
    std::vector<double> powers;
    powers.reserve(r.rays.size());
    for (const Ray& ray : r.rays) {
        if (variant == LosVariant::without_los && ray.is_los) continue;
        powers.push_back(ray.power);
    }
    if (powers.size() < 2) throw std::invalid_argument("degenerate ray set");
    return GiniSample{gini(powers), drop_index, variant, r.mode};
}

}  // namespace sparsechan
