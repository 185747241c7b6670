#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "lts/bandit/env.hpp"
#include "lts/random.hpp"
#include "lts/samplers/log_posterior.hpp"
#include "lts/samplers/sgld.hpp"

namespace lts::bandit {

/// One revealed (arm, reward) pair.
struct Pull {
    std::size_t arm = 0;
    double reward = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// argmax with ties broken by the lowest index.
inline std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

// ---------------------------------------------------------------------------
// Index rules

/// UCB1: mean + sqrt(2 ln t / k); unplayed arms get +inf.
inline double ucb1_index(double mean_hat, std::uint64_t pulls, std::uint64_t t) {
    if (pulls == 0) return kInf;
    if (t == 0) throw std::invalid_argument("ucb1_index: t must be >= 1");
    return mean_hat + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(pulls));
}

/// Exact Normal-Normal posterior for a Gaussian mean with known noise variance.
struct ConjugateGaussian {
    double mean = 0.0;
    double variance = 1.0;

    void observe(double reward, double noise_variance) {
        const double prec = 1.0 / variance + 1.0 / noise_variance;
        mean = (mean / variance + reward / noise_variance) / prec;
        variance = 1.0 / prec;
    }
};

/// Bayes-UCB: posterior quantile at level 1 - 1/(t (ln T)^c).
inline double bayes_ucb_index(const ConjugateGaussian& post, std::uint64_t t, std::uint64_t horizon,
                              double c = 0.0) {
    if (t == 0) throw std::invalid_argument("bayes_ucb_index: t must be >= 1");
    const double level =
        1.0 - 1.0 / (static_cast<double>(t) * std::pow(std::log(static_cast<double>(horizon)), c));
    if (level <= 0.0) return -kInf;
    if (level >= 1.0) return kInf;
    return boost::math::quantile(boost::math::normal(post.mean, std::sqrt(post.variance)), level);
}

/// Decaying epsilon-greedy with eps_t = min(1, c N / t).
inline std::size_t eps_greedy_choose(std::span<const double> means_hat, std::uint64_t t, Rng& rng,
                                     double c_eps = 1.0) {
    if (means_hat.empty()) throw std::invalid_argument("eps_greedy_choose: no arms");
    const double eps = std::min(1.0, c_eps * static_cast<double>(means_hat.size()) / static_cast<double>(t));
    if (uniform01(rng) < eps) {
        std::uniform_int_distribution<std::size_t> pick(0, means_hat.size() - 1);
        return pick(rng);
    }
    return argmax_lowest(means_hat);
}

// ---------------------------------------------------------------------------
// Agents. Each exposes choose(t, rng) and reveal(batch, rng); decisions between
// two reveal() calls only see data up to the earlier batch boundary.

/// Empirical-mean bookkeeping shared by the frequentist baselines.
class EmpiricalMeans {
public:
    explicit EmpiricalMeans(std::size_t n) : sum_(n, 0.0), count_(n, 0) {}

    void reveal(std::span<const Pull> batch) {
        for (const auto& p : batch) {
            sum_.at(p.arm) += p.reward;
            ++count_[p.arm];
        }
    }
    [[nodiscard]] double mean(std::size_t a) const {
        return count_[a] ? sum_[a] / static_cast<double>(count_[a]) : 0.0;
    }
    [[nodiscard]] std::uint64_t count(std::size_t a) const { return count_[a]; }
    [[nodiscard]] std::size_t size() const { return sum_.size(); }

private:
    std::vector<double> sum_;
    std::vector<std::uint64_t> count_;
};

class Ucb1Agent {
public:
    explicit Ucb1Agent(std::size_t num_arms) : stats_(num_arms), index_(num_arms) {}

    std::size_t choose(std::uint64_t t, Rng&) {
        for (std::size_t a = 0; a < stats_.size(); ++a) index_[a] = ucb1_index(stats_.mean(a), stats_.count(a), t);
        return argmax_lowest(index_);
    }
    void reveal(std::span<const Pull> batch, Rng&) { stats_.reveal(batch); }

private:
    EmpiricalMeans stats_;
    std::vector<double> index_;
};

class EpsGreedyAgent {
public:
    explicit EpsGreedyAgent(std::size_t num_arms, double c_eps = 1.0)
        : stats_(num_arms), means_(num_arms), c_eps_(c_eps) {}

    std::size_t choose(std::uint64_t t, Rng& rng) {
        for (std::size_t a = 0; a < stats_.size(); ++a) means_[a] = stats_.count(a) ? stats_.mean(a) : kInf;
        return eps_greedy_choose(means_, t, rng, c_eps_);
    }
    void reveal(std::span<const Pull> batch, Rng&) { stats_.reveal(batch); }

private:
    EmpiricalMeans stats_;
    std::vector<double> means_;
    double c_eps_;
};

/// Conjugate Gaussian posteriors for every arm; requires Gaussian arms.
class ConjugateArms {
public:
    ConjugateArms(const BanditEnv& env, const std::vector<GaussianPrior>& priors) {
        if (!env.all_of_kind(RewardKind::kGaussian))
            throw std::invalid_argument("exact Gaussian posterior needs Gaussian arms (no conjugate form for Laplace)");
        if (priors.size() != env.num_arms()) throw std::invalid_argument("one prior per arm required");
        for (std::size_t a = 0; a < env.num_arms(); ++a) {
            if (priors[a].is_flat() || priors[a].mean.size() != 1)
                throw std::invalid_argument("exact posterior needs proper scalar Gaussian priors");
            post_.push_back({priors[a].mean[0], priors[a].variance});
            noise_var_.push_back(env.arm(a).scale * env.arm(a).scale);
            if (!(noise_var_.back() > 0.0))
                throw std::invalid_argument("exact posterior needs a positive reward variance");
        }
    }

    void reveal(std::span<const Pull> batch) {
        for (const auto& p : batch) post_.at(p.arm).observe(p.reward, noise_var_[p.arm]);
    }
    [[nodiscard]] const ConjugateGaussian& posterior(std::size_t a) const { return post_[a]; }
    [[nodiscard]] std::size_t size() const { return post_.size(); }

private:
    std::vector<ConjugateGaussian> post_;
    std::vector<double> noise_var_;
};

class ExactTsAgent {
public:
    ExactTsAgent(const BanditEnv& env, const std::vector<GaussianPrior>& priors)
        : arms_(env, priors), draw_(env.num_arms()) {}

    std::size_t choose(std::uint64_t, Rng& rng) {
        for (std::size_t a = 0; a < arms_.size(); ++a) {
            const auto& p = arms_.posterior(a);
            draw_[a] = p.mean + std::sqrt(p.variance) * standard_normal(rng);
        }
        return argmax_lowest(draw_);
    }
    void reveal(std::span<const Pull> batch, Rng&) { arms_.reveal(batch); }
    [[nodiscard]] const ConjugateArms& arms() const { return arms_; }

private:
    ConjugateArms arms_;
    std::vector<double> draw_;
};

class BayesUcbAgent {
public:
    BayesUcbAgent(const BanditEnv& env, const std::vector<GaussianPrior>& priors, std::uint64_t horizon,
                  double c = 0.0)
        : arms_(env, priors), index_(env.num_arms()), horizon_(horizon), c_(c) {}

    std::size_t choose(std::uint64_t t, Rng&) {
        for (std::size_t a = 0; a < arms_.size(); ++a) index_[a] = bayes_ucb_index(arms_.posterior(a), t, horizon_, c_);
        return argmax_lowest(index_);
    }
    void reveal(std::span<const Pull> batch, Rng&) { arms_.reveal(batch); }

private:
    ConjugateArms arms_;
    std::vector<double> index_;
    std::uint64_t horizon_;
    double c_;
};

/// Per-arm Langevin posterior: likelihood model, warm-started chain, and the
/// arm's own reward history.
template <LogPosteriorModel Model>
struct ArmPosterior {
    Model model;
    ChainState chain;
    std::vector<typename Model::Datum> observed;
    Vector alpha;  // E[reward] = alpha^T theta

    explicit ArmPosterior(Model m)
        : model(std::move(m)),
          chain{model.prior().mean, 0},
          alpha(Vector::Ones(static_cast<Eigen::Index>(model.dim()))) {}

    [[nodiscard]] std::size_t count() const { return observed.size(); }
};

/// Batched Langevin Thompson sampling. Between boundaries every arm draws a
/// fresh read-out N(theta_a^k, 1/(n_a L gamma)) around its frozen chain (or a
/// prior draw while n_a = 0); at a boundary each arm with new rewards runs
/// SGLD on its own data, warm-started from its previous chain.
template <LogPosteriorModel Model>
class LangevinTsAgent {
public:
    LangevinTsAgent(std::vector<Model> models, SgldOverrides overrides, std::uint64_t seed)
        : overrides_(std::move(overrides)) {
        if (models.empty()) throw std::invalid_argument("Langevin TS needs at least one arm");
        for (std::size_t a = 0; a < models.size(); ++a) {
            arms_.emplace_back(std::move(models[a]));
            arm_rng_.push_back(substream(seed, a));
        }
        value_.resize(arms_.size());
    }

    [[nodiscard]] double gamma(std::size_t a) const {
        if (overrides_.gamma) return *overrides_.gamma;
        return default_gamma(arms_[a].model.constants(), arms_[a].model.dim());
    }

    Vector sample_arm(std::size_t a, Rng& rng) const {
        const auto& arm = arms_[a];
        if (arm.count() == 0) return arm.model.prior().sample(rng);
        return sample_scaled_posterior(arm.chain, arm.count(), arm.model.constants().L, gamma(a), rng);
    }

    std::size_t choose(std::uint64_t, Rng& rng) {
        for (std::size_t a = 0; a < arms_.size(); ++a) value_[a] = arms_[a].alpha.dot(sample_arm(a, rng));
        return argmax_lowest(value_);
    }

    void reveal(std::span<const Pull> batch, Rng&) {
        std::vector<bool> touched(arms_.size(), false);
        for (const auto& p : batch) {
            arms_.at(p.arm).observed.push_back(p.reward);
            touched[p.arm] = true;
        }
        // arms without new data keep their chain; their posterior is unchanged
        for (std::size_t a = 0; a < arms_.size(); ++a) {
            if (!touched[a]) continue;
            auto& arm = arms_[a];
            SgldConfig cfg = overrides_.apply(sgld_schedule(arm.model.constants(), arm.count()));
            arm.chain = run_sgld(arm.model, std::span<const typename Model::Datum>(arm.observed), arm.chain, cfg,
                                 arm_rng_[a]);
            ++sgld_runs_;
        }
    }

    [[nodiscard]] const ArmPosterior<Model>& arm(std::size_t a) const { return arms_.at(a); }
    [[nodiscard]] std::size_t num_arms() const { return arms_.size(); }
    [[nodiscard]] std::size_t sgld_runs() const { return sgld_runs_; }

private:
    std::vector<ArmPosterior<Model>> arms_;
    std::vector<Rng> arm_rng_;
    SgldOverrides overrides_;
    std::vector<double> value_;
    std::size_t sgld_runs_ = 0;
};

}  // namespace lts::bandit
