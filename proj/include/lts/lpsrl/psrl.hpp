#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lts/lpsrl/schedule.hpp"
#include "lts/mdp/dirichlet.hpp"
#include "lts/mdp/poi.hpp"
#include "lts/mdp/rvi.hpp"
#include "lts/mdp/tabular.hpp"
#include "lts/random.hpp"
#include "lts/samplers/mld.hpp"
#include "lts/samplers/sgld.hpp"

namespace lts::lpsrl {

using mdp::TabularMdp;

struct Transition {
    State state = 0;
    Action action = 0;
    State next = 0;
};

struct LpsrlRun {
    std::vector<State> states;                 // s_t, t = 1..T
    std::vector<Action> actions;               // a_t
    std::vector<double> rewards;               // r_t
    std::vector<double> avg_reward;            // (1/t) sum_{u <= t} r_u
    std::vector<std::uint32_t> switch_index;   // 1-based policy in force at t
    std::vector<std::uint64_t> switch_times;   // t_k
    std::vector<std::vector<Action>> policies; // pi_k
    std::vector<Vector> sampled_params;        // theta^k (flattened rows for tabular models)
    std::vector<double> sampled_gain;          // J of the sampled model

    [[nodiscard]] std::size_t switch_count() const { return switch_times.size(); }
    [[nodiscard]] double final_avg_reward() const { return avg_reward.empty() ? 0.0 : avg_reward.back(); }
};

struct SampledModel {
    TabularMdp mdp;
    Vector params;
};

/// What the PSRL loop needs from a posterior: absorb a finished batch of
/// transitions and draw a model.
template <class S>
concept ModelSampler = requires(S s, std::span<const Transition> batch, Rng& rng) {
    s.commit(batch);
    { s.sample(rng) } -> std::same_as<SampledModel>;
};

inline Vector flatten_transitions(const TabularMdp& m) {
    const auto& p = m.transitions();
    return Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
}

/// Exact Dirichlet posterior draws.
class DirichletSampler {
public:
    DirichletSampler(mdp::DirichletPosterior prior, std::vector<double> rewards)
        : post_(std::move(prior)), rewards_(std::move(rewards)) {}

    void commit(std::span<const Transition> batch) {
        for (const auto& tr : batch) post_.update(tr.state, tr.action, tr.next);
    }

    SampledModel sample(Rng& rng) {
        TabularMdp m = mdp::dirichlet_sample(post_, rewards_, rng);
        Vector params = flatten_transitions(m);
        return {std::move(m), std::move(params)};
    }

    [[nodiscard]] const mdp::DirichletPosterior& posterior() const { return post_; }

private:
    mdp::DirichletPosterior post_;
    std::vector<double> rewards_;
};

/// One mirrored Langevin chain per transition row, warm-started across switches.
/// Each row's step and budget use that row's own observation count.
class MldRowSampler {
public:
    MldRowSampler(mdp::DirichletPosterior prior, std::vector<double> rewards, MldConfig cfg)
        : post_(std::move(prior)), rewards_(std::move(rewards)), cfg_(cfg),
          chains_(post_.num_states() * post_.num_actions()) {}

    void commit(std::span<const Transition> batch) {
        for (const auto& tr : batch) post_.update(tr.state, tr.action, tr.next);
    }

    SampledModel sample(Rng& rng) {
        const std::size_t S = post_.num_states();
        const std::size_t A = post_.num_actions();
        const std::uint64_t seed = rng();
        TabularMdp m(S, A);
        for (State s = 0; s < S; ++s)
            for (Action a = 0; a < A; ++a) {
                const std::size_t row = s * A + a;
                Rng row_rng = substream(seed, row);
                const DirichletRowPosterior rp = post_.row_posterior(s, a);
                const std::size_t n = post_.observed(s, a);
                MldSample draw = run_mld(rp, cfg_.num_iters(n, S, A), cfg_.step_size(rp.total()), chains_[row],
                                         row_rng);
                m.set_row(s, a, std::span<const double>(draw.theta.data(), S));
                m.reward(s, a) = rewards_.at(row);
                chains_[row] = std::move(draw.omega);
            }
        Vector params = flatten_transitions(m);
        return {std::move(m), std::move(params)};
    }

    [[nodiscard]] const mdp::DirichletPosterior& posterior() const { return post_; }

private:
    mdp::DirichletPosterior post_;
    std::vector<double> rewards_;
    MldConfig cfg_;
    std::vector<std::optional<Vector>> chains_;
};

/// SGLD over the scalar POI parameter with the Gaussian read-out; samples
/// below the floor are clamped to it.
class PoiSgldSampler {
public:
    PoiSgldSampler(mdp::PoiMdp env_shape, mdp::PoiModel model, SgldOverrides overrides)
        : env_(std::move(env_shape)), model_(std::move(model)), overrides_(overrides),
          chain_{model_.prior().mean, 0} {}

    void commit(std::span<const Transition> batch) {
        for (const auto& tr : batch) data_.push_back({tr.action, tr.next});
    }

    SampledModel sample(Rng& rng) {
        const SmoothnessConstants c = model_.constants();
        double theta = 0.0;
        if (data_.empty()) {
            theta = model_.prior().sample(rng)[0];
        } else {
            const std::size_t n = data_.size();
            const SgldConfig cfg = overrides_.apply(sgld_schedule(c, n));
            const double gamma = overrides_.gamma ? *overrides_.gamma : default_gamma(c, 1);
            chain_ = run_sgld(model_, std::span<const mdp::PoiObservation>(data_), chain_, cfg, rng);
            theta = sample_scaled_posterior(chain_, n, c.L, gamma, rng)[0];
        }
        theta = std::max(theta, model_.theta_floor());
        return {env_.transitions(theta), Vector::Constant(1, theta)};
    }

    [[nodiscard]] const ChainState& chain() const { return chain_; }
    [[nodiscard]] std::size_t data_count() const { return data_.size(); }

private:
    mdp::PoiMdp env_;
    mdp::PoiModel model_;
    SgldOverrides overrides_;
    ChainState chain_;
    std::vector<mdp::PoiObservation> data_;
};

/// Posterior-sampling loop. At every switch the batch gathered since the last
/// switch is committed to the sampler, a model is drawn and solved with RVI,
/// and its greedy policy is followed until the next switch.
template <ModelSampler Sampler>
LpsrlRun run_psrl(const TabularMdp& env, State start, Sampler& sampler, SwitchKind kind, std::uint64_t horizon,
                  Rng& rng, const mdp::RviOptions& planner = {}) {
    if (horizon == 0) throw std::invalid_argument("run_psrl: horizon must be >= 1");
    if (start >= env.num_states()) throw std::invalid_argument("run_psrl: start state out of range");
    Rng env_rng{rng()};
    Rng agent_rng{rng()};
    SwitchSchedule schedule(kind, env.num_states(), env.num_actions());

    LpsrlRun run;
    run.states.reserve(horizon);
    run.actions.reserve(horizon);
    run.rewards.reserve(horizon);
    run.avg_reward.reserve(horizon);
    run.switch_index.reserve(horizon);

    std::vector<Transition> pending;
    std::vector<Action> policy;
    State s = start;
    double total = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        if (schedule.begin_step(t)) {
            sampler.commit(pending);
            pending.clear();
            SampledModel draw = sampler.sample(agent_rng);
            const mdp::RviResult plan = mdp::rvi(draw.mdp, planner);
            policy = plan.policy;
            run.policies.push_back(policy);
            run.sampled_params.push_back(std::move(draw.params));
            run.sampled_gain.push_back(plan.gain);
        }
        const Action a = policy[s];
        const mdp::StepResult step = mdp::mdp_step(env, s, a, env_rng);
        schedule.visit(s, a);
        pending.push_back({s, a, step.next});
        total += step.reward;
        run.states.push_back(s);
        run.actions.push_back(a);
        run.rewards.push_back(step.reward);
        run.avg_reward.push_back(total / static_cast<double>(t));
        run.switch_index.push_back(static_cast<std::uint32_t>(schedule.switch_count()));
        s = step.next;
    }
    run.switch_times = schedule.switch_times();
    return run;
}

/// Reward table R(s, a) of an environment, in the layout samplers expect.
inline std::vector<double> reward_table(const TabularMdp& env) { return env.rewards(); }

inline LpsrlRun run_lpsrl_mld(const TabularMdp& env, State start, const mdp::DirichletPosterior& prior,
                              std::uint64_t horizon, const MldConfig& cfg, Rng& rng,
                              SwitchKind kind = SwitchKind::kStaticDoubling) {
    MldRowSampler sampler(prior, reward_table(env), cfg);
    return run_psrl(env, start, sampler, kind, horizon, rng);
}

inline LpsrlRun run_lpsrl_sgld(const mdp::PoiMdp& poi, State start, const mdp::PoiModel& model,
                               std::uint64_t horizon, const SgldOverrides& overrides, Rng& rng,
                               SwitchKind kind = SwitchKind::kStaticDoubling) {
    PoiSgldSampler sampler(poi, model, overrides);
    return run_psrl(poi.true_mdp(), start, sampler, kind, horizon, rng);
}

inline LpsrlRun run_exact_psrl(const TabularMdp& env, State start, const mdp::DirichletPosterior& prior,
                               SwitchKind kind, std::uint64_t horizon, Rng& rng) {
    DirichletSampler sampler(prior, reward_table(env));
    return run_psrl(env, start, sampler, kind, horizon, rng);
}

inline LpsrlRun run_ds_psrl(const TabularMdp& env, State start, const mdp::DirichletPosterior& prior,
                            std::uint64_t horizon, Rng& rng) {
    return run_exact_psrl(env, start, prior, SwitchKind::kStaticDoubling, horizon, rng);
}

inline LpsrlRun run_db_psrl(const TabularMdp& env, State start, const mdp::DirichletPosterior& prior,
                            std::uint64_t horizon, Rng& rng) {
    return run_exact_psrl(env, start, prior, SwitchKind::kDynamicDoubling, horizon, rng);
}

inline LpsrlRun run_tsde(const TabularMdp& env, State start, const mdp::DirichletPosterior& prior,
                         std::uint64_t horizon, Rng& rng) {
    return run_exact_psrl(env, start, prior, SwitchKind::kTsde, horizon, rng);
}

/// Follows the RVI-optimal policy of the true model throughout (one policy).
inline LpsrlRun run_optimal(const TabularMdp& env, State start, std::uint64_t horizon, Rng& rng) {
    if (horizon == 0) throw std::invalid_argument("run_optimal: horizon must be >= 1");
    Rng env_rng{rng()};
    const mdp::RviResult plan = mdp::rvi(env);
    LpsrlRun run;
    run.switch_times = {1};
    run.policies = {plan.policy};
    run.sampled_params = {flatten_transitions(env)};
    run.sampled_gain = {plan.gain};
    State s = start;
    double total = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const mdp::StepResult step = mdp::mdp_step(env, s, plan.policy[s], env_rng);
        total += step.reward;
        run.states.push_back(s);
        run.actions.push_back(plan.policy[s]);
        run.rewards.push_back(step.reward);
        run.avg_reward.push_back(total / static_cast<double>(t));
        run.switch_index.push_back(1);
        s = step.next;
    }
    return run;
}

}  // namespace lts::lpsrl
