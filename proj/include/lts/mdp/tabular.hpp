#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lts/random.hpp"

namespace lts::mdp {

using State = std::size_t;
using Action = std::size_t;

/// Finite MDP with deterministic rewards R(s, a) and transition rows p(.|s, a).
class TabularMdp {
public:
    TabularMdp(std::size_t num_states, std::size_t num_actions)
        : S_(num_states), A_(num_actions), p_(num_states * num_actions * num_states, 0.0),
          r_(num_states * num_actions, 0.0) {
        if (S_ == 0 || A_ == 0) throw std::invalid_argument("MDP needs at least one state and one action");
    }

    TabularMdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transitions,
               std::vector<double> rewards)
        : S_(num_states), A_(num_actions), p_(std::move(transitions)), r_(std::move(rewards)) {
        if (S_ == 0 || A_ == 0) throw std::invalid_argument("MDP needs at least one state and one action");
        if (p_.size() != S_ * A_ * S_ || r_.size() != S_ * A_)
            throw std::invalid_argument("transition/reward table has the wrong size");
        validate();
    }

    [[nodiscard]] std::size_t num_states() const { return S_; }
    [[nodiscard]] std::size_t num_actions() const { return A_; }

    [[nodiscard]] double p(State s, Action a, State next) const { return p_[(s * A_ + a) * S_ + next]; }
    double& p(State s, Action a, State next) { return p_[(s * A_ + a) * S_ + next]; }
    [[nodiscard]] double reward(State s, Action a) const { return r_[s * A_ + a]; }
    double& reward(State s, Action a) { return r_[s * A_ + a]; }

    [[nodiscard]] std::span<const double> row(State s, Action a) const {
        return {p_.data() + (s * A_ + a) * S_, S_};
    }
    std::span<double> row(State s, Action a) { return {p_.data() + (s * A_ + a) * S_, S_}; }

    void set_row(State s, Action a, std::span<const double> probs) {
        if (probs.size() != S_) throw std::invalid_argument("set_row: wrong row length");
        std::copy(probs.begin(), probs.end(), row(s, a).begin());
    }

    [[nodiscard]] const std::vector<double>& transitions() const { return p_; }
    [[nodiscard]] const std::vector<double>& rewards() const { return r_; }

    /// Every row a probability vector (sum within 1e-12), rewards finite.
    void validate(double tol = 1e-12) const {
        for (State s = 0; s < S_; ++s) {
            for (Action a = 0; a < A_; ++a) {
                double sum = 0.0;
                for (double q : row(s, a)) {
                    if (!(q >= 0.0)) throw std::invalid_argument(where(s, a) + " has a negative entry");
                    sum += q;
                }
                if (std::abs(sum - 1.0) > tol)
                    throw std::invalid_argument(where(s, a) + " sums to " + std::to_string(sum));
                if (!std::isfinite(reward(s, a))) throw std::invalid_argument(where(s, a) + " has a non-finite reward");
            }
        }
    }

    [[nodiscard]] double reward_range() const {
        const auto [lo, hi] = std::minmax_element(r_.begin(), r_.end());
        return *hi - *lo;
    }

    friend bool operator==(const TabularMdp&, const TabularMdp&) = default;

private:
    static std::string where(State s, Action a) {
        return "transition row (s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
    }

    std::size_t S_;
    std::size_t A_;
    std::vector<double> p_;
    std::vector<double> r_;
};

struct StepResult {
    double reward = 0.0;
    State next = 0;
};

/// Samples a categorical index from a probability row.
inline std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
    double u = uniform01(rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (u < probs[i]) return i;
        u -= probs[i];
    }
    // rounding left u just above the last positive entry
    for (std::size_t i = probs.size(); i-- > 0;)
        if (probs[i] > 0.0) return i;
    return probs.size() - 1;
}

inline StepResult mdp_step(const TabularMdp& mdp, State s, Action a, Rng& rng) {
    if (s >= mdp.num_states() || a >= mdp.num_actions()) throw std::out_of_range("mdp_step: bad state or action");
    return {mdp.reward(s, a), sample_categorical(mdp.row(s, a), rng)};
}

}  // namespace lts::mdp
