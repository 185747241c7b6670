#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "lts/bandit/agents.hpp"
#include "lts/bandit/presets.hpp"
#include "lts/bandit/run.hpp"
#include "lts/harness/config.hpp"
#include "lts/lpsrl/presets.hpp"
#include "lts/lpsrl/psrl.hpp"
#include "lts/mdp/dirichlet.hpp"
#include "lts/mdp/riverswim.hpp"
#include "lts/random.hpp"

namespace lts::harness {

/// One (algorithm, scheme, seed) run. `value` is cum_regret (bandit) or
/// avg_reward (mdp) at t = 1..T; `index` is the batch or policy index at t.
struct RunRecord {
    std::uint64_t run_id = 0;
    std::string algorithm;
    std::string scheme;
    std::uint64_t seed = 0;
    std::vector<double> value;
    std::vector<std::uint32_t> index;
    bool failed = false;
    std::string error;

    [[nodiscard]] double terminal() const { return value.empty() ? 0.0 : value.back(); }
    /// Batches (bandit) or policy switches (mdp) used by the run.
    [[nodiscard]] std::uint64_t count() const { return index.empty() ? 0 : index.back(); }
};

struct RunPlan {
    std::uint64_t run_id = 0;
    AlgorithmSpec algorithm;
    std::uint64_t seed = 0;
};

/// Canonical enumeration: algorithms in config order, seeds in config order.
inline std::vector<RunPlan> plan_runs(const ExperimentConfig& cfg) {
    std::vector<RunPlan> plans;
    std::uint64_t id = 0;
    for (const auto& a : cfg.algorithms)
        for (auto seed : cfg.seeds) plans.push_back({id++, a, seed});
    return plans;
}

/// The run's own stream, hash(master_seed, run_id).
inline Rng run_stream(const ExperimentConfig& cfg, std::uint64_t run_id) {
    return make_rng(derive_seed(cfg.master_seed, run_id));
}

/// Environment instance for a seed; shared by every algorithm run on that seed.
inline bandit::BanditInstance bandit_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    Rng env_rng = substream(seed, "env");
    return bandit::instantiate(cfg.bandit, env_rng);
}

namespace detail {

inline RunRecord from_metrics(const bandit::RunMetrics& m) {
    RunRecord r;
    r.value = m.cum_regret;
    r.index = m.batch_index;
    return r;
}

inline RunRecord from_lpsrl(const lpsrl::LpsrlRun& run) {
    RunRecord r;
    r.value = run.avg_reward;
    r.index = run.switch_index;
    return r;
}

inline RunRecord execute_bandit(const ExperimentConfig& cfg, const RunPlan& plan, Rng& rng) {
    using namespace bandit;
    const BanditInstance inst = bandit_instance(cfg, plan.seed);
    const BatchScheme scheme = parse_scheme(plan.algorithm.scheme);
    const std::string& name = plan.algorithm.name;
    const std::uint64_t T = cfg.horizon;
    if (name == "sgld-ts") {
        if (cfg.bandit.kind == RewardKind::kGaussian)
            return from_metrics(run_blts(inst.env, gaussian_models(inst), T, cfg.bandit.sgld, rng, scheme));
        return from_metrics(run_blts(inst.env, laplace_models(inst), T, cfg.bandit.sgld, rng, scheme));
    }
    if (name == "exact-ts") return from_metrics(run_exact_ts(inst.env, inst.priors, scheme, T, rng));
    if (name == "ucb1") {
        Ucb1Agent agent(inst.env.num_arms());
        return from_metrics(run_bandit(inst.env, agent, scheme, T, rng));
    }
    if (name == "bayes-ucb") {
        BayesUcbAgent agent(inst.env, inst.priors, T);
        return from_metrics(run_bandit(inst.env, agent, scheme, T, rng));
    }
    if (name == "eps-greedy") {
        EpsGreedyAgent agent(inst.env.num_arms());
        return from_metrics(run_bandit(inst.env, agent, scheme, T, rng));
    }
    throw std::invalid_argument("unknown bandit algorithm '" + name + "'");
}

inline RunRecord execute_mdp(const ExperimentConfig& cfg, const RunPlan& plan, Rng& rng) {
    using namespace lpsrl;
    const MdpPreset& p = cfg.mdp;
    const bool poi = p.kind == MdpKind::kPoi;
    const mdp::TabularMdp env = poi ? make_poi(p.poi).true_mdp() : mdp::riverswim();
    const mdp::State start = poi ? 0 : mdp::kRiverSwimStart;
    const mdp::DirichletPosterior prior(env.num_states(), env.num_actions(), p.prior_count);
    const std::string& name = plan.algorithm.name;
    const std::uint64_t T = cfg.horizon;
    if (name == "optimal") return from_lpsrl(run_optimal(env, start, T, rng));
    const SwitchKind kind = parse_switch_kind(plan.algorithm.scheme);
    if (name == "mld-psrl") return from_lpsrl(run_lpsrl_mld(env, start, prior, T, p.mld, rng, kind));
    if (name == "sgld-psrl") {
        if (!poi) throw std::invalid_argument("sgld-psrl needs the POI environment");
        return from_lpsrl(run_lpsrl_sgld(make_poi(p.poi), start, make_poi_model(p.poi), T, p.sgld, rng, kind));
    }
    if (name == "ds-psrl" || name == "db-psrl" || name == "tsde")
        return from_lpsrl(run_exact_psrl(env, start, prior, kind, T, rng));
    throw std::invalid_argument("unknown mdp algorithm '" + name + "'");
}

}  // namespace detail

/// Runs one planned run. Exceptions are caught and turned into a failed record.
inline RunRecord execute_run(const ExperimentConfig& cfg, const RunPlan& plan) {
    RunRecord rec;
    try {
        Rng rng = run_stream(cfg, plan.run_id);
        rec = cfg.kind == ExperimentKind::kBandit ? detail::execute_bandit(cfg, plan, rng)
                                                  : detail::execute_mdp(cfg, plan, rng);
    } catch (const std::exception& e) {
        rec = RunRecord{};
        rec.failed = true;
        rec.error = e.what();
    }
    rec.run_id = plan.run_id;
    rec.algorithm = plan.algorithm.name;
    rec.scheme = plan.algorithm.scheme;
    rec.seed = plan.seed;
    return rec;
}

/// Executes every planned run on `workers` threads. Records come back in
/// run_id order whatever the thread interleaving.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    const std::vector<RunPlan> plans = plan_runs(cfg);
    std::vector<RunRecord> records(plans.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < plans.size(); i = next++) records[i] = execute_run(cfg, plans[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(plans.size())));
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return records;
}

}  // namespace lts::harness
