#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lts/bandit/agents.hpp"
#include "lts/bandit/batching.hpp"
#include "lts/bandit/env.hpp"
#include "lts/random.hpp"

namespace lts::bandit {

struct RunMetrics {
    std::vector<std::size_t> arms;          // a_t, t = 1..T
    std::vector<double> regret;             // Delta_{a_t}
    std::vector<double> cum_regret;
    std::vector<std::uint32_t> batch_index; // 1-based batch containing t
    std::vector<std::uint64_t> boundaries;  // steps at which a batch closed
    std::uint64_t total_batches = 0;

    [[nodiscard]] double final_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
};

/// Plays `agent` against `env` for T steps under the given batching scheme.
/// Rewards are revealed to the agent only at batch boundaries; a trailing
/// partial batch counts as one more batch.
template <class Agent>
RunMetrics run_bandit(const BanditEnv& env, Agent& agent, BatchScheme scheme, std::uint64_t horizon, Rng& rng) {
    if (horizon == 0) throw std::invalid_argument("run_bandit: horizon must be >= 1");
    Rng env_rng{rng()};
    Rng agent_rng{rng()};
    BatchClock clock(scheme, env.num_arms(), horizon);

    RunMetrics m;
    m.arms.reserve(horizon);
    m.regret.reserve(horizon);
    m.cum_regret.reserve(horizon);
    m.batch_index.reserve(horizon);

    std::vector<Pull> pending;
    double cum = 0.0;
    std::uint32_t batch = 1;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const std::size_t a = agent.choose(t, agent_rng);
        if (a >= env.num_arms()) throw std::logic_error("agent chose an invalid arm");
        pending.push_back({a, env.pull(a, env_rng)});
        const double r = env.gap(a);
        cum += r;
        m.arms.push_back(a);
        m.regret.push_back(r);
        m.cum_regret.push_back(cum);
        m.batch_index.push_back(batch);
        if (clock.step(a)) {
            agent.reveal(pending, agent_rng);
            pending.clear();
            m.boundaries.push_back(t);
            ++batch;
        }
    }
    m.total_batches = m.boundaries.size() + (pending.empty() ? 0 : 1);
    return m;
}

template <LogPosteriorModel Model>
RunMetrics run_blts(const BanditEnv& env, std::vector<Model> models, std::uint64_t horizon,
                    const SgldOverrides& overrides, Rng& rng, BatchScheme scheme = BatchScheme::kDynamic) {
    if (models.size() != env.num_arms()) throw std::invalid_argument("run_blts: one model per arm required");
    LangevinTsAgent<Model> agent(std::move(models), overrides, rng());
    return run_bandit(env, agent, scheme, horizon, rng);
}

inline RunMetrics run_exact_ts(const BanditEnv& env, const std::vector<GaussianPrior>& priors, BatchScheme scheme,
                               std::uint64_t horizon, Rng& rng) {
    ExactTsAgent agent(env, priors);
    return run_bandit(env, agent, scheme, horizon, rng);
}

}  // namespace lts::bandit
