#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/mdp/tabular.hpp"

namespace lts::mdp {

/// sp(h) = max h - min h.
inline double span(std::span<const double> h) {
    if (h.empty()) throw std::invalid_argument("span of an empty vector");
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    return *hi - *lo;
}

struct RviResult {
    double gain = 0.0;            // J, the optimal average reward
    std::vector<double> bias;     // h, normalized so h(s_ref) = 0
    double residual = 0.0;        // max_s |J + h(s) - max_a [R + P h](s)|
    std::vector<Action> policy;   // greedy w.r.t. h
    std::size_t iterations = 0;

    [[nodiscard]] double bias_span() const { return span(bias); }
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    [[nodiscard]] double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

struct RviOptions {
    double tol = 1e-8;
    std::size_t max_iters = 1'000'000;
    State reference = 0;
    // Iterates on tau P + (1 - tau) I, which has the same bias and gain tau J
    // but is aperiodic, so periodic chains converge too.
    double aperiodicity = 0.5;
};

inline double q_value(const TabularMdp& mdp, State s, Action a, std::span<const double> h) {
    double q = mdp.reward(s, a);
    const auto row = mdp.row(s, a);
    for (State n = 0; n < mdp.num_states(); ++n) q += row[n] * h[n];
    return q;
}

/// Bellman optimality operator (T h)(s) = max_a [R(s,a) + sum p(s'|s,a) h(s')].
inline void bellman_backup(const TabularMdp& mdp, std::span<const double> h, std::span<double> out) {
    for (State s = 0; s < mdp.num_states(); ++s) {
        double best = q_value(mdp, s, 0, h);
        for (Action a = 1; a < mdp.num_actions(); ++a) best = std::max(best, q_value(mdp, s, a, h));
        out[s] = best;
    }
}

/// Greedy policy w.r.t. h; near-ties (within 1e-12 relative) go to the lowest action index.
inline std::vector<Action> greedy_policy(const TabularMdp& mdp, std::span<const double> h) {
    std::vector<Action> pi(mdp.num_states(), 0);
    std::vector<double> q(mdp.num_actions());
    for (State s = 0; s < mdp.num_states(); ++s) {
        for (Action a = 0; a < mdp.num_actions(); ++a) q[a] = q_value(mdp, s, a, h);
        const double best = *std::max_element(q.begin(), q.end());
        const double slack = 1e-12 * std::max(1.0, std::abs(best));
        for (Action a = 0; a < mdp.num_actions(); ++a) {
            if (q[a] >= best - slack) {
                pi[s] = a;
                break;
            }
        }
    }
    return pi;
}

inline double bellman_residual(const TabularMdp& mdp, double gain, std::span<const double> h) {
    std::vector<double> th(mdp.num_states());
    bellman_backup(mdp, h, th);
    double worst = 0.0;
    for (State s = 0; s < mdp.num_states(); ++s) worst = std::max(worst, std::abs(gain + h[s] - th[s]));
    return worst;
}

/// Relative value iteration for the average-reward optimality equation
/// J + h(s) = max_a [R(s,a) + E h(s')]. Stops once the Bellman residual with
/// J = midpoint of (T h - h) is at most tol. Throws ConvergenceError when the
/// iteration cap is reached.
inline RviResult rvi(const TabularMdp& mdp, const RviOptions& opt = {}) {
    const std::size_t S = mdp.num_states();
    if (opt.reference >= S) throw std::invalid_argument("rvi: reference state out of range");
    if (!(opt.aperiodicity > 0.0 && opt.aperiodicity <= 1.0))
        throw std::invalid_argument("rvi: aperiodicity must lie in (0, 1]");
    const double tau = opt.aperiodicity;

    std::vector<double> h(S, 0.0), th(S), diff(S);
    double last = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= opt.max_iters; ++it) {
        bellman_backup(mdp, h, th);
        for (State s = 0; s < S; ++s) diff[s] = th[s] - h[s];
        const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
        last = 0.5 * (*hi - *lo);
        if (last <= opt.tol) {
            RviResult res;
            res.gain = 0.5 * (*hi + *lo);
            res.bias = h;
            res.policy = greedy_policy(mdp, h);
            res.residual = bellman_residual(mdp, res.gain, h);
            res.iterations = it;
            return res;
        }
        const double ref = tau * th[opt.reference] + (1.0 - tau) * h[opt.reference];
        for (State s = 0; s < S; ++s) h[s] = tau * th[s] + (1.0 - tau) * h[s] - ref;
    }
    throw ConvergenceError("relative value iteration did not converge in " + std::to_string(opt.max_iters) +
                               " iterations (last residual " + std::to_string(last) + ")",
                           last);
}

inline RviResult rvi(const TabularMdp& mdp, double tol) {
    RviOptions opt;
    opt.tol = tol;
    return rvi(mdp, opt);
}

/// Exact average reward of a stationary policy from a start state, by
/// iterating the state distribution (Cesaro average over `steps`).
inline double policy_gain_estimate(const TabularMdp& mdp, std::span<const Action> policy, State start,
                                   std::size_t steps = 20000) {
    std::vector<double> dist(mdp.num_states(), 0.0), next(mdp.num_states());
    dist[start] = 1.0;
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (State s = 0; s < mdp.num_states(); ++s) {
            if (dist[s] == 0.0) continue;
            total += dist[s] * mdp.reward(s, policy[s]);
            const auto row = mdp.row(s, policy[s]);
            for (State n = 0; n < mdp.num_states(); ++n) next[n] += dist[s] * row[n];
        }
        dist.swap(next);
    }
    return total / static_cast<double>(steps);
}

}  // namespace lts::mdp
