#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/random.hpp"
#include "lts/samplers/log_posterior.hpp"

namespace lts {

/// Raised when a sampler produces a non-finite gradient or iterate.
class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SgldConfig {
    std::size_t minibatch_size = 1;
    double step_size = 1e-3;
    std::size_t num_iters = 1000;
    double gamma = 1.0;
};

/// Per-experiment replacements for individual schedule entries.
struct SgldOverrides {
    std::optional<std::size_t> minibatch_size;
    std::optional<double> step_size;
    std::optional<std::size_t> num_iters;
    std::optional<double> gamma;

    [[nodiscard]] SgldConfig apply(SgldConfig cfg) const {
        if (minibatch_size) cfg.minibatch_size = *minibatch_size;
        if (step_size) cfg.step_size = *step_size;
        if (num_iters) cfg.num_iters = *num_iters;
        if (gamma) cfg.gamma = *gamma;
        return cfg;
    }

    friend bool operator==(const SgldOverrides&, const SgldOverrides&) = default;
};

/// Minibatch, step size and iteration count that give the Wasserstein
/// convergence guarantee for n data points:
///   s = 32 L^2 / (m nu),  eta = m n / (32 L^2 (n+1)^2),  N = 1280 L^2 (n+1)^2 / (m^2 n^2).
/// Fractional minibatch and iteration counts are rounded up. gamma is left at 1.
inline SgldConfig sgld_schedule(const SmoothnessConstants& c, std::size_t n) {
    c.validate();
    if (n == 0) throw std::invalid_argument("sgld_schedule: no data (sample from the prior instead)");
    const double nd = static_cast<double>(n);
    const double L2 = c.L * c.L;
    SgldConfig cfg;
    cfg.minibatch_size = static_cast<std::size_t>(std::ceil(32.0 * L2 / (c.m * c.nu) - 1e-9));
    cfg.step_size = c.m * nd / (32.0 * L2 * (nd + 1.0) * (nd + 1.0));
    cfg.num_iters = static_cast<std::size_t>(
        std::ceil(1280.0 * L2 * (nd + 1.0) * (nd + 1.0) / (c.m * c.m * nd * nd) - 1e-9));
    cfg.gamma = 1.0;
    return cfg;
}

/// Posterior scaling that the regret analysis asks for:
/// gamma = min(1/(d kappa^3), m/(32 L sigma)) with sigma = 16 + 4 d L^2/(nu m).
inline double default_gamma(const SmoothnessConstants& c, std::size_t dim) {
    c.validate();
    const double d = static_cast<double>(dim);
    const double kappa = c.kappa();
    const double sigma = 16.0 + 4.0 * d * c.L * c.L / (c.nu * c.m);
    return std::min(1.0 / (d * kappa * kappa * kappa), c.m / (32.0 * c.L * sigma));
}

/// Position of a warm-started Langevin chain after its last update.
struct ChainState {
    Vector position;
    std::size_t data_count_at_update = 0;
};

namespace detail {

inline std::string describe(const Vector& v) {
    std::ostringstream os;
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ')';
    return os.str();
}

/// Reusable index buffer for drawing minibatches. Without replacement while
/// the batch fits in the data, with replacement otherwise.
class MinibatchSampler {
public:
    explicit MinibatchSampler(std::size_t n) : idx_(n) { std::iota(idx_.begin(), idx_.end(), 0); }

    std::span<const std::size_t> draw(std::size_t size, Rng& rng) {
        const std::size_t n = idx_.size();
        if (size == n) return idx_;
        if (size > n) {
            buf_.resize(size);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& b : buf_) b = pick(rng);
            return buf_;
        }
        // partial Fisher-Yates; the buffer stays a permutation between calls
        for (std::size_t i = 0; i < size; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(idx_[i], idx_[pick(rng)]);
        }
        return std::span<const std::size_t>(idx_.data(), size);
    }

private:
    std::vector<std::size_t> idx_;
    std::vector<std::size_t> buf_;
};

}  // namespace detail

/// SGLD with batched data. Starting from `warm_start`, runs cfg.num_iters steps of
///   theta <- theta - eta * grad_U(theta) + sqrt(2 eta) z,
///   grad_U(theta) = -(n/|D|) sum_{x in D} grad log p(x|theta) - grad log prior(theta),
/// and returns the final iterate. Throws SamplerError on a non-finite gradient.
template <LogPosteriorModel Model>
ChainState run_sgld(const Model& model, std::span<const typename Model::Datum> data,
                    const ChainState& warm_start, const SgldConfig& cfg, Rng& rng) {
    if (data.empty()) throw std::invalid_argument("run_sgld: empty data set");
    if (cfg.minibatch_size == 0 || !(cfg.step_size > 0.0))
        throw std::invalid_argument("run_sgld: minibatch size and step size must be positive");
    if (static_cast<std::size_t>(warm_start.position.size()) != model.dim())
        throw std::invalid_argument("run_sgld: warm start has the wrong dimension");

    ChainState out{warm_start.position, data.size()};
    if (cfg.num_iters == 0) {
        out.data_count_at_update = warm_start.data_count_at_update;
        return out;
    }

    Vector& theta = out.position;
    const auto d = theta.size();
    const double n = static_cast<double>(data.size());
    const double noise_sd = std::sqrt(2.0 * cfg.step_size);
    detail::MinibatchSampler batches(data.size());
    Vector lik_grad(d);

    for (std::size_t it = 0; it < cfg.num_iters; ++it) {
        const auto batch = batches.draw(cfg.minibatch_size, rng);
        const double weight = n / static_cast<double>(batch.size());
        lik_grad.setZero();
        for (std::size_t j : batch) {
            if constexpr (AccumulatingModel<Model>) {
                model.add_grad_log_lik(data[j], theta, lik_grad, 1.0);
            } else {
                lik_grad += model.grad_log_lik(data[j], theta);
            }
        }
        // theta - eta * grad_U = theta + eta * (weight * lik_grad + prior_grad)
        const Vector drift = weight * lik_grad + model.grad_log_prior(theta);
        if (!drift.allFinite()) {
            throw SamplerError("SGLD produced a non-finite gradient at iteration " + std::to_string(it) +
                               ", theta = " + detail::describe(theta));
        }
        theta += cfg.step_size * drift;
        for (Eigen::Index i = 0; i < d; ++i) theta[i] += noise_sd * standard_normal(rng);
    }
    return out;
}

/// Gaussian read-out N(chain.position, 1/(n L gamma) I).
inline Vector sample_scaled_posterior(const ChainState& chain, std::size_t n, double L, double gamma,
                                      Rng& rng) {
    if (n == 0 || !(gamma > 0.0) || !(L > 0.0))
        throw std::invalid_argument("sample_scaled_posterior: need n >= 1, L > 0, gamma > 0");
    if (std::isinf(gamma)) return chain.position;
    const double sd = 1.0 / std::sqrt(static_cast<double>(n) * L * gamma);
    Vector out = chain.position;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sd * standard_normal(rng);
    return out;
}

}  // namespace lts
