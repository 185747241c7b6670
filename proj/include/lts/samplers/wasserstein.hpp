#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace lts {

namespace detail {

/// Integrates |Qa(u) - Qb(u)|^p over u in (0,1) for the empirical quantile
/// functions of two samples. Equal sizes reduce to pairing sorted values.
inline double quantile_coupling_cost(std::span<const double> a, std::span<const double> b, double p) {
    if (a.empty() || b.empty()) throw std::invalid_argument("Wasserstein distance needs nonempty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    double cost = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    double u = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double next_a = static_cast<double>(i + 1) / na;
        const double next_b = static_cast<double>(j + 1) / nb;
        const double next = std::min(next_a, next_b);
        cost += (next - u) * std::pow(std::abs(sa[i] - sb[j]), p);
        u = next;
        if (next_a <= next) ++i;
        if (next_b <= next) ++j;
    }
    return cost;
}

}  // namespace detail

/// 1-D empirical W2 under the monotone (sorted quantile) coupling.
inline double empirical_w2_1d(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(detail::quantile_coupling_cost(a, b, 2.0));
}

inline double empirical_w1_1d(std::span<const double> a, std::span<const double> b) {
    return detail::quantile_coupling_cost(a, b, 1.0);
}

/// Closed-form W2 between N(mean_a, var_a) and N(mean_b, var_b).
inline double gaussian_w2(double mean_a, double var_a, double mean_b, double var_b) {
    if (var_a < 0.0 || var_b < 0.0) throw std::invalid_argument("gaussian_w2: negative variance");
    const double dm = mean_a - mean_b;
    const double ds = std::sqrt(var_a) - std::sqrt(var_b);
    return std::sqrt(dm * dm + ds * ds);
}

}  // namespace lts
