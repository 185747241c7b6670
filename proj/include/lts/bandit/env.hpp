#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/random.hpp"

namespace lts::bandit {

enum class RewardKind { kGaussian, kLaplace };

inline std::string to_string(RewardKind k) { return k == RewardKind::kGaussian ? "gaussian" : "laplace"; }

/// One arm's reward law. `scale` is the standard deviation for Gaussian arms
/// and the diversity b for Laplace arms. Scale 0 is a point mass.
struct ArmDistribution {
    RewardKind kind = RewardKind::kGaussian;
    double mean = 0.0;
    double scale = 1.0;

    friend bool operator==(const ArmDistribution&, const ArmDistribution&) = default;
};

inline double sample_reward(const ArmDistribution& arm, Rng& rng) {
    if (arm.scale == 0.0) return arm.mean;
    if (arm.kind == RewardKind::kGaussian) return arm.mean + arm.scale * standard_normal(rng);
    // Laplace via inverse CDF on u in (-1/2, 1/2)
    double u = uniform01(rng) - 0.5;
    while (u == -0.5) u = uniform01(rng) - 0.5;
    const double s = u < 0.0 ? -1.0 : 1.0;
    return arm.mean - arm.scale * s * std::log1p(-2.0 * std::abs(u));
}

class BanditEnv {
public:
    explicit BanditEnv(std::vector<ArmDistribution> arms) : arms_(std::move(arms)) {
        if (arms_.empty()) throw std::invalid_argument("bandit needs at least one arm");
        for (const auto& a : arms_) {
            if (!std::isfinite(a.mean) || !(a.scale >= 0.0) || !std::isfinite(a.scale))
                throw std::invalid_argument("arm means must be finite and scales nonnegative");
        }
        best_ = 0;
        for (std::size_t i = 1; i < arms_.size(); ++i)
            if (arms_[i].mean > arms_[best_].mean) best_ = i;
    }

    [[nodiscard]] std::size_t num_arms() const { return arms_.size(); }
    [[nodiscard]] const std::vector<ArmDistribution>& arms() const { return arms_; }
    [[nodiscard]] const ArmDistribution& arm(std::size_t a) const { return arms_.at(a); }
    /// argmax of the means, lowest index on ties.
    [[nodiscard]] std::size_t best_arm() const { return best_; }
    [[nodiscard]] double best_mean() const { return arms_[best_].mean; }
    [[nodiscard]] double gap(std::size_t a) const { return best_mean() - arms_.at(a).mean; }

    [[nodiscard]] bool all_of_kind(RewardKind k) const {
        for (const auto& a : arms_)
            if (a.kind != k) return false;
        return true;
    }

    double pull(std::size_t a, Rng& rng) const {
        if (a >= arms_.size()) throw std::out_of_range("pull: arm index " + std::to_string(a));
        return sample_reward(arms_[a], rng);
    }

private:
    std::vector<ArmDistribution> arms_;
    std::size_t best_ = 0;
};

}  // namespace lts::bandit
