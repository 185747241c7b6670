#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "lts/random.hpp"

namespace lts {

using Vector = Eigen::VectorXd;

/// Curvature constants of a log-concave likelihood.
///   m  : strong concavity of log p(x|theta) in theta
///   L  : Lipschitz constant of its gradient in theta
///   nu : strong log-concavity of p(x|theta) in x
struct SmoothnessConstants {
    double m = 1.0;
    double L = 1.0;
    double nu = 1.0;

    [[nodiscard]] double kappa() const { return std::max(L / m, L / nu); }

    void validate() const {
        if (!(m > 0.0) || !(L >= m) || !(nu > 0.0) || !std::isfinite(L) || !std::isfinite(nu)) {
            throw std::invalid_argument("smoothness constants require 0 < m <= L and nu > 0 (got m=" +
                                        std::to_string(m) + ", L=" + std::to_string(L) +
                                        ", nu=" + std::to_string(nu) + ")");
        }
    }
};

/// Isotropic Gaussian prior N(mean, variance * I). An infinite variance is a
/// flat prior: zero gradient, and `mean` is only used as the starting point.
struct GaussianPrior {
    Vector mean = Vector::Zero(1);
    double variance = 1.0;

    static GaussianPrior scalar(double mu, double var) { return {Vector::Constant(1, mu), var}; }
    static GaussianPrior flat(std::size_t dim, double start = 0.0) {
        return {Vector::Constant(static_cast<Eigen::Index>(dim), start),
                std::numeric_limits<double>::infinity()};
    }

    [[nodiscard]] bool is_flat() const { return std::isinf(variance); }
    [[nodiscard]] double precision() const { return is_flat() ? 0.0 : 1.0 / variance; }

    [[nodiscard]] Vector grad_log(const Vector& theta) const {
        if (is_flat()) return Vector::Zero(theta.size());
        return (mean - theta) / variance;
    }

    [[nodiscard]] Vector sample(Rng& rng) const {
        if (is_flat()) throw std::logic_error("cannot sample a flat prior");
        Vector out(mean.size());
        const double sd = std::sqrt(variance);
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = mean[i] + sd * standard_normal(rng);
        return out;
    }

    /// log Q with Q = max_theta prior(theta) / prior(theta_star). Diagnostic only.
    [[nodiscard]] double log_quality(const Vector& theta_star) const {
        if (is_flat()) return 0.0;
        return (theta_star - mean).squaredNorm() / (2.0 * variance);
    }
};

// clang-format off
template <class M>
concept LogPosteriorModel = requires(const M& model, const typename M::Datum& x, const Vector& theta) {
    typename M::Datum;
    { model.dim() } -> std::convertible_to<std::size_t>;
    { model.grad_log_lik(x, theta) } -> std::convertible_to<Vector>;
    { model.grad_log_prior(theta) } -> std::convertible_to<Vector>;
    { model.constants() } -> std::convertible_to<SmoothnessConstants>;
    { model.prior() } -> std::convertible_to<GaussianPrior>;
};

/// Models may provide an allocation-free accumulator used by the SGLD inner loop.
template <class M>
concept AccumulatingModel = LogPosteriorModel<M> &&
    requires(const M& model, const typename M::Datum& x, const Vector& theta, Vector& out, double w) {
        model.add_grad_log_lik(x, theta, out, w);
    };
// clang-format on

/// Scalar reward r ~ N(alpha^T theta, sigma^2) with alpha = 1; the gradient
/// (r - theta_i) / sigma^2 is applied coordinate-wise.
class GaussianRewardModel {
public:
    using Datum = double;

    GaussianRewardModel(double sigma, GaussianPrior prior) : sigma_(sigma), prior_(std::move(prior)) {
        if (!(sigma > 0.0)) throw std::invalid_argument("Gaussian likelihood needs sigma > 0");
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(prior_.mean.size()); }
    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] const GaussianPrior& prior() const { return prior_; }

    [[nodiscard]] SmoothnessConstants constants() const {
        const double prec = 1.0 / (sigma_ * sigma_);
        return {prec, prec, prec};
    }

    [[nodiscard]] Vector grad_log_lik(double r, const Vector& theta) const {
        return (Vector::Constant(theta.size(), r) - theta) / (sigma_ * sigma_);
    }
    void add_grad_log_lik(double r, const Vector& theta, Vector& out, double w) const {
        const double s = w / (sigma_ * sigma_);
        for (Eigen::Index i = 0; i < theta.size(); ++i) out[i] += s * (r - theta[i]);
    }
    [[nodiscard]] Vector grad_log_prior(const Vector& theta) const { return prior_.grad_log(theta); }

private:
    double sigma_;
    GaussianPrior prior_;
};

/// Scalar reward r ~ Laplace(theta, b). Log-likelihood is not strongly concave,
/// so the scheduling constants are supplied by the caller.
class LaplaceRewardModel {
public:
    using Datum = double;

    LaplaceRewardModel(double b, GaussianPrior prior, SmoothnessConstants constants)
        : b_(b), prior_(std::move(prior)), constants_(constants) {
        if (!(b > 0.0)) throw std::invalid_argument("Laplace likelihood needs b > 0");
        constants_.validate();
    }

    /// Constants from the per-observation Fisher information 1/b^2.
    LaplaceRewardModel(double b, GaussianPrior prior)
        : LaplaceRewardModel(b, std::move(prior), {1.0 / (b * b), 1.0 / (b * b), 1.0 / (b * b)}) {}

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(prior_.mean.size()); }
    [[nodiscard]] double scale() const { return b_; }
    [[nodiscard]] const GaussianPrior& prior() const { return prior_; }
    [[nodiscard]] SmoothnessConstants constants() const { return constants_; }

    // subgradient 0 at the kink r == theta
    static double sign(double v) { return (v > 0.0) - (v < 0.0); }

    [[nodiscard]] Vector grad_log_lik(double r, const Vector& theta) const {
        Vector g(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) g[i] = sign(r - theta[i]) / b_;
        return g;
    }
    void add_grad_log_lik(double r, const Vector& theta, Vector& out, double w) const {
        for (Eigen::Index i = 0; i < theta.size(); ++i) out[i] += w * sign(r - theta[i]) / b_;
    }
    [[nodiscard]] Vector grad_log_prior(const Vector& theta) const { return prior_.grad_log(theta); }

private:
    double b_;
    GaussianPrior prior_;
    SmoothnessConstants constants_;
};

}  // namespace lts
