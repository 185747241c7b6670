#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lts/mdp/tabular.hpp"
#include "lts/random.hpp"
#include "lts/samplers/mld.hpp"

namespace lts::mdp {

/// Independent Dirichlet posteriors over every transition row p(.|s, a).
/// counts = prior pseudo-counts + observed transitions.
class DirichletPosterior {
public:
    DirichletPosterior(std::size_t num_states, std::size_t num_actions, double prior_count = 1.0)
        : S_(num_states), A_(num_actions),
          prior_(num_states * num_actions * num_states, prior_count),
          counts_(prior_) {
        if (!(prior_count > 0.0)) throw std::invalid_argument("Dirichlet prior pseudo-counts must be positive");
    }

    /// Prior given cell by cell (S x A x S, row-major like TabularMdp).
    DirichletPosterior(std::size_t num_states, std::size_t num_actions, std::vector<double> prior)
        : S_(num_states), A_(num_actions), prior_(std::move(prior)), counts_(prior_) {
        if (prior_.size() != S_ * A_ * S_) throw std::invalid_argument("Dirichlet prior has the wrong size");
        for (double c : prior_)
            if (!(c > 0.0)) throw std::invalid_argument("Dirichlet prior pseudo-counts must be positive");
    }

    [[nodiscard]] std::size_t num_states() const { return S_; }
    [[nodiscard]] std::size_t num_actions() const { return A_; }

    void update(State s, Action a, State next) {
        if (s >= S_ || a >= A_ || next >= S_) throw std::out_of_range("dirichlet_update: index out of range");
        counts_[index(s, a, next)] += 1.0;
    }

    [[nodiscard]] double count(State s, Action a, State next) const { return counts_[index(s, a, next)]; }
    [[nodiscard]] double prior_count(State s, Action a, State next) const { return prior_[index(s, a, next)]; }

    /// Number of observed transitions out of (s, a).
    [[nodiscard]] std::size_t observed(State s, Action a) const {
        double n = 0.0;
        for (State x = 0; x < S_; ++x) n += counts_[index(s, a, x)] - prior_[index(s, a, x)];
        return static_cast<std::size_t>(n + 0.5);
    }

    [[nodiscard]] Vector alpha(State s, Action a) const {
        Vector out(static_cast<Eigen::Index>(S_));
        for (State x = 0; x < S_; ++x) out[static_cast<Eigen::Index>(x)] = counts_[index(s, a, x)];
        return out;
    }

    [[nodiscard]] DirichletRowPosterior row_posterior(State s, Action a) const {
        return DirichletRowPosterior(alpha(s, a));
    }

    [[nodiscard]] const std::vector<double>& counts() const { return counts_; }

    /// Posterior-mean transition model with the given reward table.
    [[nodiscard]] TabularMdp mean_model(const std::vector<double>& rewards) const {
        TabularMdp m(S_, A_);
        for (State s = 0; s < S_; ++s)
            for (Action a = 0; a < A_; ++a) {
                const Vector row = alpha(s, a) / alpha(s, a).sum();
                m.set_row(s, a, std::span<const double>(row.data(), S_));
                m.reward(s, a) = rewards.at(s * A_ + a);
            }
        return m;
    }

private:
    [[nodiscard]] std::size_t index(State s, Action a, State next) const { return (s * A_ + a) * S_ + next; }

    std::size_t S_;
    std::size_t A_;
    std::vector<double> prior_;
    std::vector<double> counts_;
};

inline void dirichlet_update(DirichletPosterior& post, State s, Action a, State next) { post.update(s, a, next); }

/// Exact posterior draw of every transition row; rewards copied from `rewards`.
inline TabularMdp dirichlet_sample(const DirichletPosterior& post, const std::vector<double>& rewards, Rng& rng) {
    const std::size_t S = post.num_states();
    const std::size_t A = post.num_actions();
    if (rewards.size() != S * A) throw std::invalid_argument("dirichlet_sample: reward table has the wrong size");
    TabularMdp m(S, A);
    for (State s = 0; s < S; ++s)
        for (Action a = 0; a < A; ++a) {
            const Vector row = sample_dirichlet(post.alpha(s, a), rng);
            m.set_row(s, a, std::span<const double>(row.data(), S));
            m.reward(s, a) = rewards[s * A + a];
        }
    return m;
}

}  // namespace lts::mdp
