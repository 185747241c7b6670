#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/bandit/env.hpp"
#include "lts/random.hpp"
#include "lts/samplers/log_posterior.hpp"
#include "lts/samplers/sgld.hpp"

namespace lts::bandit {

/// Bandit setup with true means evenly spaced on [mean_lo, mean_hi], shuffled
/// per seed. Informative priors put evenly spaced prior means on
/// [prior_lo, prior_hi] in the order of the true means; otherwise every arm
/// gets N(prior_lo, prior_variance).
struct BanditPreset {
    std::string name;
    RewardKind kind = RewardKind::kGaussian;
    std::size_t num_arms = 15;
    double mean_lo = 1.0;
    double mean_hi = 20.0;
    double scale = 0.5;
    bool informative = true;
    double prior_lo = 14.0;
    double prior_hi = 20.0;
    double prior_variance = 1.0 / 0.375;
    SgldOverrides sgld;

    friend bool operator==(const BanditPreset&, const BanditPreset&) = default;
};

struct BanditInstance {
    BanditEnv env;
    std::vector<GaussianPrior> priors;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

inline BanditInstance instantiate(const BanditPreset& p, Rng& rng) {
    if (p.num_arms == 0) throw std::invalid_argument("preset needs at least one arm");
    std::vector<double> means = linspace(p.mean_lo, p.mean_hi, p.num_arms);
    std::shuffle(means.begin(), means.end(), rng);

    std::vector<ArmDistribution> arms;
    for (double mu : means) arms.push_back({p.kind, mu, p.scale});

    std::vector<GaussianPrior> priors(p.num_arms);
    if (p.informative) {
        std::vector<std::size_t> order(p.num_arms);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
        const std::vector<double> prior_means = linspace(p.prior_lo, p.prior_hi, p.num_arms);
        for (std::size_t rank = 0; rank < p.num_arms; ++rank)
            priors[order[rank]] = GaussianPrior::scalar(prior_means[rank], p.prior_variance);
    } else {
        for (auto& pr : priors) pr = GaussianPrior::scalar(p.prior_lo, p.prior_variance);
    }
    return {BanditEnv(std::move(arms)), std::move(priors)};
}

/// Read-out scaling used by the shipped experiment presets: the read-out
/// variance 1/(n L) then equals the likelihood-only posterior variance.
inline constexpr double kPresetGamma = 1.0;

inline std::vector<BanditPreset> bandit_presets() {
    SgldOverrides sgld;
    sgld.gamma = kPresetGamma;

    BanditPreset g_inf{"gaussian15-informative", RewardKind::kGaussian, 15, 1.0, 20.0, 0.5,
                       true, 14.0, 20.0, 1.0 / 0.375, sgld};
    BanditPreset g_uninf{"gaussian15-uninformative", RewardKind::kGaussian, 15, 1.0, 20.0, 0.5,
                         false, 14.0, 14.0, 8.0, sgld};
    BanditPreset l_inf{"laplace10-informative", RewardKind::kLaplace, 10, 1.0, 10.0, 0.8,
                       true, 4.0, 10.0, 1.0 / 0.875, sgld};
    return {g_inf, g_uninf, l_inf};
}

inline std::optional<BanditPreset> find_bandit_preset(const std::string& name) {
    for (auto& p : bandit_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

/// Langevin likelihood models matching an instance's arms and priors.
inline std::vector<GaussianRewardModel> gaussian_models(const BanditInstance& inst) {
    std::vector<GaussianRewardModel> out;
    for (std::size_t a = 0; a < inst.env.num_arms(); ++a)
        out.emplace_back(inst.env.arm(a).scale, inst.priors[a]);
    return out;
}

inline std::vector<LaplaceRewardModel> laplace_models(const BanditInstance& inst) {
    std::vector<LaplaceRewardModel> out;
    for (std::size_t a = 0; a < inst.env.num_arms(); ++a)
        out.emplace_back(inst.env.arm(a).scale, inst.priors[a]);
    return out;
}

}  // namespace lts::bandit
