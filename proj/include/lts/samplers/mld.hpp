#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "lts/random.hpp"
#include "lts/samplers/log_posterior.hpp"
#include "lts/samplers/mirror.hpp"
#include "lts/samplers/sgld.hpp"

namespace lts {

/// Dirichlet(alpha) posterior over one categorical row: prior pseudo-counts
/// plus observed counts, all K entries kept explicitly.
class DirichletRowPosterior {
public:
    explicit DirichletRowPosterior(Vector alpha) : alpha_(std::move(alpha)) {
        if (alpha_.size() < 2) throw std::invalid_argument("Dirichlet row needs at least two categories");
        if (!(alpha_.array() > 0.0).all() || !alpha_.allFinite())
            throw std::invalid_argument("Dirichlet concentrations must be positive and finite");
    }

    static DirichletRowPosterior from_counts(const Vector& prior, const Vector& counts) {
        return DirichletRowPosterior(prior + counts);
    }

    [[nodiscard]] const Vector& alpha() const { return alpha_; }
    [[nodiscard]] std::size_t categories() const { return static_cast<std::size_t>(alpha_.size()); }
    [[nodiscard]] std::size_t free_dim() const { return categories() - 1; }
    [[nodiscard]] double total() const { return alpha_.sum(); }
    [[nodiscard]] Vector mean() const { return alpha_ / total(); }

    /// U(theta) = -sum_i (alpha_i - 1) log theta_i over the full K-vector, up to a constant.
    [[nodiscard]] double potential(const Vector& free_theta) const {
        const Vector full = to_full_simplex(free_theta);
        return -((alpha_.array() - 1.0) * full.array().log()).sum();
    }

private:
    Vector alpha_;
};

/// Dual potential W(omega) = U(grad h*(omega)) + log det grad^2 h(grad h*(omega)),
/// i.e. the negative log density of the pushforward of the posterior under grad h.
inline double dual_potential(const Vector& omega, const DirichletRowPosterior& post) {
    const Vector theta = entropic::inverse(omega);
    return post.potential(theta) + entropic::hessian_log_det(theta);
}

/// Closed form of grad W for a Dirichlet posterior: W(omega) = -sum_{i<K} alpha_i omega_i + A log(1 + sum e^omega),
/// so grad_j W = A theta_j - alpha_j with A = sum alpha.
inline Vector dual_potential_grad(const Vector& omega, const DirichletRowPosterior& post) {
    if (omega.size() != static_cast<Eigen::Index>(post.free_dim()))
        throw std::invalid_argument("dual_potential_grad: dimension mismatch");
    const Vector theta = entropic::inverse(omega);
    Vector g = post.total() * theta - post.alpha().head(omega.size());
    if (!g.allFinite()) throw SamplerError("dual potential gradient is not finite at omega = " + detail::describe(omega));
    return g;
}

enum class MldBudget {
    kLinear,       // iters = c_iter * n
    kStateAction,  // iters = c_iter * |S| |A| * n
};

struct MldConfig {
    double step_constant = 0.1;
    double iter_constant = 50.0;
    std::size_t min_iters = 500;
    MldBudget budget = MldBudget::kLinear;

    friend bool operator==(const MldConfig&, const MldConfig&) = default;

    /// step = c / A for a row with total Dirichlet concentration A. With unit
    /// prior counts this is c / (n + K) for n observations over K categories.
    [[nodiscard]] double step_size(double concentration) const {
        if (!(concentration > 0.0)) throw std::invalid_argument("MLD step needs a positive concentration");
        return step_constant / concentration;
    }

    [[nodiscard]] std::size_t num_iters(std::size_t n, std::size_t num_states = 1, std::size_t num_actions = 1) const {
        double scale = static_cast<double>(n);
        if (budget == MldBudget::kStateAction) scale *= static_cast<double>(num_states * num_actions);
        return std::max(min_iters, static_cast<std::size_t>(std::ceil(iter_constant * scale)));
    }
};

struct MldSample {
    Vector theta;  // full K-vector on the simplex
    Vector omega;  // terminal dual state, reusable as a warm start
};

/// Full K-vector version of grad h*, with the implied coordinate computed
/// directly so the row sums to one to rounding.
inline Vector simplex_from_dual(const Vector& omega) {
    const double shift = std::max(0.0, omega.maxCoeff());
    Vector full(omega.size() + 1);
    full.head(omega.size()) = (omega.array() - shift).exp();
    full[omega.size()] = std::exp(-shift);
    full /= full.sum();
    return full;
}

/// Mirrored Langevin dynamics: Euler-Maruyama in the dual space,
///   omega <- omega - step * grad W(omega) + sqrt(2 step) z,
/// returning theta = grad h*(omega) after the last iteration. Without a warm
/// start the chain begins at the dual image of the posterior mean.
inline MldSample run_mld(const DirichletRowPosterior& post, std::size_t num_iters, double step_size,
                         const std::optional<Vector>& warm_start, Rng& rng) {
    if (!(step_size > 0.0)) throw std::invalid_argument("run_mld: step size must be positive");
    Vector omega = warm_start ? *warm_start : entropic::forward(to_free_simplex(post.mean()));
    if (omega.size() != static_cast<Eigen::Index>(post.free_dim()))
        throw std::invalid_argument("run_mld: warm start has the wrong dimension");

    const double noise_sd = std::sqrt(2.0 * step_size);
    for (std::size_t it = 0; it < num_iters; ++it) {
        omega -= step_size * dual_potential_grad(omega, post);
        for (Eigen::Index i = 0; i < omega.size(); ++i) omega[i] += noise_sd * standard_normal(rng);
        if (!omega.allFinite())
            throw SamplerError("MLD iterate diverged at iteration " + std::to_string(it));
    }
    return {simplex_from_dual(omega), std::move(omega)};
}

/// Exact Dirichlet draw via normalized Gamma variates.
inline Vector sample_dirichlet(const Vector& alpha, Rng& rng) {
    Vector out(alpha.size());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        std::gamma_distribution<double> g(alpha[i], 1.0);
        out[i] = g(rng);
        sum += out[i];
    }
    if (!(sum > 0.0)) {
        // every gamma draw underflowed; fall back to the mean
        return alpha / alpha.sum();
    }
    return out / sum;
}

}  // namespace lts
