#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lts/samplers/log_posterior.hpp"

namespace lts {

// Simplex points over K categories are stored as K-1 free coordinates; the
// last category's mass is implied as 1 - sum(free).

inline Vector to_full_simplex(const Vector& free) {
    Vector full(free.size() + 1);
    full.head(free.size()) = free;
    full[free.size()] = 1.0 - free.sum();
    return full;
}

inline Vector to_free_simplex(const Vector& full) {
    if (full.size() < 2) throw std::invalid_argument("simplex needs at least two categories");
    return full.head(full.size() - 1);
}

inline bool in_open_simplex(const Vector& free) {
    return (free.array() > 0.0).all() && free.sum() < 1.0;
}

/// Entropic mirror map h(theta) = sum theta_i log theta_i + (1 - sum theta) log(1 - sum theta).
namespace entropic {

/// grad h: omega_i = log theta_i - log(1 - sum theta).
inline Vector forward(const Vector& theta) {
    if (!in_open_simplex(theta))
        throw std::domain_error("entropic forward map needs a point strictly inside the simplex");
    const double log_last = std::log1p(-theta.sum());
    return theta.array().log() - log_last;
}

/// grad h*: theta_i = exp(omega_i) / (1 + sum_j exp(omega_j)), evaluated with a
/// max shift so large omegas do not overflow.
inline Vector inverse(const Vector& omega) {
    if (!omega.allFinite()) throw std::domain_error("entropic inverse map needs a finite dual point");
    const double shift = std::max(0.0, omega.maxCoeff());
    const Eigen::ArrayXd e = (omega.array() - shift).exp();
    const double denom = std::exp(-shift) + e.sum();
    return e / denom;
}

/// log det of the Hessian of h, which equals -sum_{i=1}^{K} log theta_i (implied coordinate included).
inline double hessian_log_det(const Vector& theta) {
    if (!in_open_simplex(theta)) throw std::domain_error("hessian_log_det needs an interior point");
    return -theta.array().log().sum() - std::log1p(-theta.sum());
}

}  // namespace entropic

}  // namespace lts
