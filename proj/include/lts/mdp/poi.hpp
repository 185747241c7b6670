#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/mdp/tabular.hpp"
#include "lts/samplers/log_posterior.hpp"

namespace lts::mdp {

/// Points-of-interest recommender. States and actions are POIs; recommending
/// POI a is accepted w.p. p(a)^{1/theta}, otherwise the user moves to x != a
/// w.p. p(x) / z(theta) with z(theta) = sum_{x != a} p(x) / (1 - p(a)^{1/theta}).
/// The next POI does not depend on the current one. Visiting POI s pays reward(s).
class PoiMdp {
public:
    PoiMdp(std::vector<double> base_probs, std::vector<double> rewards, double theta_true)
        : p_(std::move(base_probs)), r_(std::move(rewards)), theta_(theta_true) {
        if (p_.size() < 2) throw std::invalid_argument("POI model needs at least two POIs");
        if (r_.size() != p_.size()) throw std::invalid_argument("one reward per POI required");
        double sum = 0.0;
        for (double q : p_) {
            if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("POI base probabilities must lie in (0, 1)");
            sum += q;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("POI base probabilities must sum to 1");
        if (!(theta_true > 0.0)) throw std::invalid_argument("POI theta must be positive");
    }

    [[nodiscard]] std::size_t poi_count() const { return p_.size(); }
    [[nodiscard]] const std::vector<double>& base_probs() const { return p_; }
    [[nodiscard]] const std::vector<double>& rewards() const { return r_; }
    [[nodiscard]] double theta_true() const { return theta_; }

    /// p(x | recommend a, theta).
    [[nodiscard]] std::vector<double> next_distribution(Action a, double theta) const {
        if (!(theta > 0.0)) throw std::domain_error("POI transitions need theta > 0");
        const std::size_t K = p_.size();
        if (a >= K) throw std::out_of_range("POI action out of range");
        const double accept = std::pow(p_[a], 1.0 / theta);
        const double others = 1.0 - p_[a];
        std::vector<double> row(K);
        for (std::size_t x = 0; x < K; ++x) row[x] = x == a ? accept : p_[x] * (1.0 - accept) / others;
        return row;
    }

    /// Tabular MDP induced by theta.
    [[nodiscard]] TabularMdp transitions(double theta) const {
        const std::size_t K = p_.size();
        TabularMdp m(K, K);
        for (Action a = 0; a < K; ++a) {
            const auto row = next_distribution(a, theta);
            for (State s = 0; s < K; ++s) {
                m.set_row(s, a, row);
                m.reward(s, a) = r_[s];
            }
        }
        return m;
    }

    [[nodiscard]] TabularMdp true_mdp() const { return transitions(theta_); }

private:
    std::vector<double> p_;
    std::vector<double> r_;
    double theta_;
};

struct PoiObservation {
    Action recommended = 0;
    State landed = 0;
};

/// Log-likelihood of one transition under theta.
inline double poi_loglik(const std::vector<double>& base_probs, double theta, const PoiObservation& obs) {
    if (!(theta > 0.0)) throw std::domain_error("POI log-likelihood needs theta > 0");
    const double pa = base_probs.at(obs.recommended);
    const double log_pa = std::log(pa);
    if (obs.landed == obs.recommended) return log_pa / theta;
    const double accept = std::exp(log_pa / theta);
    return std::log(base_probs.at(obs.landed)) - std::log1p(-pa) + std::log1p(-accept);
}

/// d/dtheta of the log-likelihood:
///   accepted:  -log p(a) / theta^2
///   otherwise: q log p(a) / (theta^2 (1 - q)),  q = p(a)^{1/theta}
inline double poi_loglik_grad(const std::vector<double>& base_probs, double theta, const PoiObservation& obs) {
    if (!(theta > 0.0)) throw std::domain_error("POI log-likelihood gradient needs theta > 0");
    const double log_pa = std::log(base_probs.at(obs.recommended));
    if (log_pa == 0.0) return 0.0;
    const double t2 = theta * theta;
    if (obs.landed == obs.recommended) return -log_pa / t2;
    const double accept = std::exp(log_pa / theta);
    return accept * log_pa / (t2 * -std::expm1(log_pa / theta));
}

/// Per-observation Fisher information of theta, averaged over recommended POIs.
inline double poi_fisher_information(const std::vector<double>& base_probs, double theta) {
    double total = 0.0;
    for (double pa : base_probs) {
        const double c = std::log(pa);
        const double q = std::exp(c / theta);
        const double dq = -q * c / (theta * theta);
        total += dq * dq / (q * (1.0 - q));
    }
    return total / static_cast<double>(base_probs.size());
}

/// SGLD target for the scalar POI parameter. Gradients are evaluated at
/// max(theta, floor) so an iterate that strays below zero is pushed back.
class PoiModel {
public:
    using Datum = PoiObservation;

    PoiModel(std::vector<double> base_probs, GaussianPrior prior, SmoothnessConstants constants,
             double theta_floor = 0.05)
        : p_(std::move(base_probs)), prior_(std::move(prior)), constants_(constants), floor_(theta_floor) {
        if (prior_.mean.size() != 1) throw std::invalid_argument("POI parameter is scalar");
        constants_.validate();
    }

    [[nodiscard]] std::size_t dim() const { return 1; }
    [[nodiscard]] const GaussianPrior& prior() const { return prior_; }
    [[nodiscard]] SmoothnessConstants constants() const { return constants_; }
    [[nodiscard]] double theta_floor() const { return floor_; }

    [[nodiscard]] Vector grad_log_lik(const PoiObservation& obs, const Vector& theta) const {
        return Vector::Constant(1, poi_loglik_grad(p_, std::max(theta[0], floor_), obs));
    }
    void add_grad_log_lik(const PoiObservation& obs, const Vector& theta, Vector& out, double w) const {
        out[0] += w * poi_loglik_grad(p_, std::max(theta[0], floor_), obs);
    }
    [[nodiscard]] Vector grad_log_prior(const Vector& theta) const { return prior_.grad_log(theta); }

private:
    std::vector<double> p_;
    GaussianPrior prior_;
    SmoothnessConstants constants_;
    double floor_;
};

}  // namespace lts::mdp
