// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lts/bandit/batching.hpp"
#include "lts/harness/config.hpp"
#include "lts/harness/csv.hpp"
#include "lts/harness/experiment.hpp"
#include "lts/lpsrl/presets.hpp"
#include "lts/lpsrl/psrl.hpp"
#include "lts/mdp/poi.hpp"
#include "lts/mdp/riverswim.hpp"
#include "lts/mdp/rvi.hpp"
#include "lts/samplers/log_posterior.hpp"
#include "lts/samplers/mld.hpp"
#include "lts/samplers/sgld.hpp"
#include "lts/samplers/wasserstein.hpp"

using namespace lts;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [FAIL]");
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return xs.size() > 1 ? std::sqrt(s / static_cast<double>(xs.size() - 1)) : 0.0;
}

harness::ExperimentConfig config(const std::string& yaml) { return harness::parse_config(yaml); }

std::string ten_seeds() { return "seeds: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]\n"; }

std::vector<const harness::RunRecord*> runs_of(const std::vector<harness::RunRecord>& recs, const std::string& alg,
                                               const std::string& scheme) {
    std::vector<const harness::RunRecord*> out;
    for (const auto& r : recs)
        if (r.algorithm == alg && r.scheme == scheme) out.push_back(&r);
    return out;
}

std::vector<double> terminals(const std::vector<const harness::RunRecord*>& rs) {
    std::vector<double> out;
    for (const auto* r : rs) out.push_back(r->failed ? std::nan("") : r->terminal());
    return out;
}

std::vector<double> counts(const std::vector<const harness::RunRecord*>& rs) {
    std::vector<double> out;
    for (const auto* r : rs) out.push_back(static_cast<double>(r->count()));
    return out;
}

// ---------------------------------------------------------------------------

Outcome sampler_oracles() {
    Outcome o;
    // SGLD on a conjugate Gaussian model, n = 100
    const GaussianRewardModel model(1.0, GaussianPrior::scalar(0.0, 1.0));
    Rng data_rng = make_rng(2718);
    std::vector<double> data;
    for (int i = 0; i < 100; ++i) data.push_back(1.0 + standard_normal(data_rng));
    double sum = 0.0;
    for (double x : data) sum += x;
    const double post_var = 1.0 / (1.0 + 100.0);
    const double post_mean = post_var * sum;
    const double post_sd = std::sqrt(post_var);
    const SgldConfig cfg = sgld_schedule(model.constants(), data.size());
    const double L = model.constants().L;

    Rng rng = make_rng(31415);
    std::vector<double> chain, readout, exact, exact_readout;
    const double readout_var = 1.0 / (100.0 * L * bandit::kPresetGamma);
    for (int i = 0; i < 10'000; ++i) {
        const ChainState end = run_sgld(model, std::span<const double>(data), {model.prior().mean, 0}, cfg, rng);
        chain.push_back(end.position[0]);
        readout.push_back(sample_scaled_posterior(end, data.size(), L, bandit::kPresetGamma, rng)[0]);
        exact.push_back(post_mean + post_sd * standard_normal(rng));
        exact_readout.push_back(post_mean + std::sqrt(post_var + readout_var) * standard_normal(rng));
    }
    const double w_chain = empirical_w2_1d(chain, exact);
    const double w_read = empirical_w2_1d(readout, exact_readout);
    o.check(w_chain <= 0.1 * post_sd, fmt("SGLD chain W2 %.4f <= %.4f", w_chain, 0.1 * post_sd));
    o.check(w_read <= 0.1 * post_sd, fmt("read-out W2 %.4f <= %.4f", w_read, 0.1 * post_sd));

    // MLD on a Dirichlet row with counts (40, 10, 10)
    Vector prior = Vector::Ones(3), obs(3);
    obs << 40, 10, 10;
    const auto row = DirichletRowPosterior::from_counts(prior, obs);
    const MldConfig mcfg;
    Vector acc = Vector::Zero(3);
    for (int i = 0; i < 10'000; ++i)
        acc += run_mld(row, mcfg.num_iters(60), mcfg.step_size(row.total()), std::nullopt, rng).theta;
    acc /= 10'000.0;
    const Vector want = row.alpha() / row.total();
    const double err = (acc - want).cwiseAbs().maxCoeff();
    o.check(err <= 0.02, fmt("MLD max coordinate mean error %.4f <= 0.02", err));
    return o;
}

const char* kGaussianCfg = R"(experiment: bandit
preset: gaussian15-informative
algorithms:
  - {name: sgld-ts, scheme: dynamic}
  - {name: exact-ts, scheme: dynamic}
  - {name: ucb1, scheme: sequential}
  - {name: sgld-ts, scheme: static}
  - {name: sgld-ts, scheme: sequential}
horizon: 650
)";

const std::vector<harness::RunRecord>& gaussian_records() {
    static const auto recs = [] {
        const auto cfg = config(std::string(kGaussianCfg) + ten_seeds());
        return harness::run_experiment(cfg);
    }();
    return recs;
}

Outcome gaussian_bandit() {
    Outcome o;
    const auto& recs = gaussian_records();
    const double sgld = mean(terminals(runs_of(recs, "sgld-ts", "dynamic")));
    const double exact = mean(terminals(runs_of(recs, "exact-ts", "dynamic")));
    const double ucb = mean(terminals(runs_of(recs, "ucb1", "sequential")));
    o.check(sgld >= 70.0 && sgld <= 160.0, fmt("SGLD-TS regret %.2f in [70, 160]", sgld));
    o.check(sgld <= 1.5 * exact, fmt("SGLD-TS %.2f <= 1.5 x Exact-TS %.2f", sgld, exact));
    o.check(ucb >= 130.0 && ucb <= 180.0, fmt("UCB1 regret %.2f in [130, 180]", ucb));
    return o;
}

Outcome communication_cost() {
    Outcome o;
    const auto& recs = gaussian_records();
    const auto dyn = counts(runs_of(recs, "sgld-ts", "dynamic"));
    const double dyn_mean = mean(dyn);
    o.check(dyn_mean >= 18.0 && dyn_mean <= 30.0, fmt("dynamic batches mean %.2f in [18, 30]", dyn_mean));
    bool static_ok = true, seq_ok = true;
    for (double c : counts(runs_of(recs, "sgld-ts", "static"))) static_ok &= c == 9.0 || c == 10.0;
    for (double c : counts(runs_of(recs, "sgld-ts", "sequential"))) seq_ok &= c == 650.0;
    o.check(static_ok, "static batches in {9, 10}");
    o.check(seq_ok, "sequential batches = 650");
    bool bound_ok = true;
    for (const auto* r : runs_of(recs, "sgld-ts", "dynamic"))
        bound_ok &= r->count() <= bandit::dynamic_batch_bound(15, 650);

    Rng rng = make_rng(4242);
    int violations = 0;
    for (int run = 0; run < 1000; ++run) {
        const std::size_t N = 1 + static_cast<std::size_t>(20 * uniform01(rng));
        const std::uint64_t T = 1 + static_cast<std::uint64_t>(2000 * uniform01(rng));
        bandit::DynamicDoublingState st(N);
        std::uint64_t boundaries = 0;
        for (std::uint64_t t = 1; t <= T; ++t) boundaries += st.update(static_cast<std::size_t>(N * uniform01(rng)));
        violations += boundaries > bandit::dynamic_batch_bound(N, T);
    }
    o.check(bound_ok && violations == 0, fmt("batch bound violations: %.0f of 1000 random runs", violations));
    return o;
}

Outcome laplace_bandit() {
    Outcome o;
    const auto cfg = config(R"(experiment: bandit
preset: laplace10-informative
algorithms:
  - {name: sgld-ts, scheme: dynamic}
  - {name: ucb1, scheme: sequential}
horizon: 650
)" + ten_seeds());
    const auto recs = harness::run_experiment(cfg);
    const auto s = terminals(runs_of(recs, "sgld-ts", "dynamic"));
    const auto u = terminals(runs_of(recs, "ucb1", "sequential"));
    int wins = 0;
    for (std::size_t i = 0; i < s.size(); ++i) wins += s[i] < u[i];
    o.check(wins >= 8, fmt("SGLD-TS beats UCB1 in %.0f/10 seeds (mean %.2f vs %.2f)", wins, mean(s), mean(u)));
    return o;
}

const std::vector<harness::RunRecord>& riverswim_records() {
    static const auto recs = [] {
        const auto cfg = config(R"(experiment: mdp
preset: riverswim
algorithms: [mld-psrl, ds-psrl, tsde]
horizon: 3000
)" + ten_seeds());
        return harness::run_experiment(cfg);
    }();
    return recs;
}

Outcome riverswim() {
    Outcome o;
    const double j_star = mdp::rvi(mdp::riverswim()).gain;
    const auto& recs = riverswim_records();
    const auto mld = terminals(runs_of(recs, "mld-psrl", "static"));
    const auto ds = terminals(runs_of(recs, "ds-psrl", "static"));
    const double pooled = std::sqrt(0.5 * (std::pow(sample_sd(mld), 2) + std::pow(sample_sd(ds), 2)));
    o.check(mean(mld) >= 0.9 * j_star, fmt("MLD-PSRL %.3f >= 0.9 J* = %.3f", mean(mld), 0.9 * j_star));
    o.check(std::abs(mean(mld) - mean(ds)) <= pooled,
            fmt("|MLD %.3f - DS %.3f| <= pooled sd %.3f", mean(mld), mean(ds), pooled));
    bool twelve = true;
    for (const auto* alg : {"mld-psrl", "ds-psrl"})
        for (double c : counts(runs_of(recs, alg, "static"))) twelve &= c == 12.0;
    o.check(twelve, "static switch count 12 on every seed");
    const auto tsde = counts(runs_of(recs, "tsde", "tsde"));
    double tsde_min = 1e300;
    for (double c : tsde) tsde_min = std::min(tsde_min, c);
    o.check(tsde_min >= 5.0 * 12.0, fmt("TSDE switches min %.0f (mean %.1f) >= 60", tsde_min, mean(tsde)));
    return o;
}

mdp::TabularMdp random_mdp(std::size_t S, std::size_t A, Rng& rng) {
    mdp::TabularMdp m(S, A);
    std::vector<double> row(S);
    for (mdp::State s = 0; s < S; ++s)
        for (mdp::Action a = 0; a < A; ++a) {
            double z = 0.0;
            for (auto& x : row) z += (x = 0.05 + uniform01(rng));
            for (auto& x : row) x /= z;
            m.set_row(s, a, row);
            m.reward(s, a) = 10.0 * uniform01(rng) - 5.0;
        }
    return m;
}

Outcome planner() {
    Outcome o;
    const mdp::RviResult river = mdp::rvi(mdp::riverswim());
    o.check(river.residual <= 1e-8, fmt("riverswim residual %.2e <= 1e-8", river.residual));

    Rng rng = make_rng(77);
    double worst = 0.0;
    bool same_policy = true;
    for (int i = 0; i < 200; ++i) {
        mdp::TabularMdp m = random_mdp(2 + i % 6, 2 + i % 3, rng);
        const auto base = mdp::rvi(m);
        const double c = 20.0 * uniform01(rng) - 10.0;
        for (mdp::State s = 0; s < m.num_states(); ++s)
            for (mdp::Action a = 0; a < m.num_actions(); ++a) m.reward(s, a) += c;
        const auto shifted = mdp::rvi(m);
        worst = std::max(worst, std::abs(shifted.gain - base.gain - c));
        same_policy &= shifted.policy == base.policy;
    }
    o.check(worst <= 1e-9 && same_policy, fmt("shift covariance: max |dJ - c| %.1e, policies equal", worst));

    mdp::TabularMdp cycle(2, 1);
    cycle.p(0, 0, 1) = 1.0;
    cycle.p(1, 0, 0) = 1.0;
    cycle.reward(1, 0) = 1.0;
    const double j = mdp::rvi(cycle).gain;
    o.check(std::abs(j - 0.5) <= 1e-8, fmt("2-cycle J = %.10f", j));
    return o;
}

Outcome batching_suite() {
    Outcome o;
    Rng rng = make_rng(99);
    std::uint64_t violations = 0;
    for (int run = 0; run < 1000; ++run) {
        const std::size_t N = 1 + static_cast<std::size_t>(8 * uniform01(rng));
        const std::uint64_t T = 1 + static_cast<std::uint64_t>(400 * uniform01(rng));
        std::vector<double> w(N);
        for (auto& x : w) x = std::pow(uniform01(rng), 3.0) + 1e-3;
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        bandit::DynamicDoublingState st(N);
        for (std::uint64_t t = 1; t <= T; ++t) {
            st.update(pick(rng));
            for (std::size_t a = 0; a < N; ++a)
                violations += st.pulls()[a] > 2 * st.pulls_at_last_boundary()[a];
        }
    }
    o.check(violations == 0, fmt("doubling inequality violations: %.0f", static_cast<double>(violations)));

    bool powers = true;
    for (std::uint64_t k = 1; k <= 63; ++k) {
        const auto [t, len] = lpsrl::static_schedule_next(k);
        powers &= t == (std::uint64_t{1} << (k - 1)) && len == t;
    }
    o.check(powers, "static schedule = 2^(k-1) for k = 1..63");

    // identical switch logs across algorithms, seeds and environments
    std::vector<std::uint64_t> reference;
    bool identical = true;
    const auto poi = *lpsrl::find_mdp_preset("poi5");
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Rng a = make_rng(seed), b = make_rng(seed + 10), c = make_rng(seed + 20);
        const auto env = mdp::riverswim();
        const mdp::DirichletPosterior prior(5, 2, 1.0);
        for (const auto& run : {lpsrl::run_lpsrl_mld(env, 0, prior, 3000, MldConfig{}, a),
                                lpsrl::run_ds_psrl(env, 0, prior, 3000, b),
                                lpsrl::run_lpsrl_sgld(lpsrl::make_poi(poi.poi), 0, lpsrl::make_poi_model(poi.poi),
                                                      3000, poi.sgld, c)}) {
            if (reference.empty()) reference = run.switch_times;
            identical &= run.switch_times == reference;
        }
    }
    o.check(identical && reference.size() == 12, "static switch logs identical across algorithms and environments");
    return o;
}

Outcome gradient_checks() {
    Outcome o;
    Rng rng = make_rng(1234);
    double worst_mld = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int K = 2 + static_cast<int>(5 * uniform01(rng));
        Vector alpha(K);
        for (int k = 0; k < K; ++k) alpha[k] = 0.5 + std::floor(30.0 * uniform01(rng));
        const DirichletRowPosterior post(alpha);
        Vector omega(K - 1);
        for (int k = 0; k < K - 1; ++k) omega[k] = 4.0 * (uniform01(rng) - 0.5);
        const Vector g = dual_potential_grad(omega, post);
        Vector fd(K - 1);
        for (int k = 0; k < K - 1; ++k) {
            Vector up = omega, down = omega;
            up[k] += 1e-5;
            down[k] -= 1e-5;
            fd[k] = (dual_potential(up, post) - dual_potential(down, post)) / 2e-5;
        }
        worst_mld = std::max(worst_mld, (g - fd).norm() / std::max(1.0, fd.norm()));
    }
    o.check(worst_mld <= 1e-5, fmt("dual potential gradient max rel error %.2e", worst_mld));

    double worst_poi = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> base(2 + static_cast<std::size_t>(6 * uniform01(rng)));
        double z = 0.0;
        for (auto& p : base) z += (p = 0.05 + uniform01(rng));
        for (auto& p : base) p /= z;
        const double theta = 0.2 + 5.0 * uniform01(rng);
        const mdp::PoiObservation obs{static_cast<mdp::Action>(base.size() * uniform01(rng)),
                                      static_cast<mdp::State>(base.size() * uniform01(rng))};
        const double g = mdp::poi_loglik_grad(base, theta, obs);
        const double fd =
            (mdp::poi_loglik(base, theta + 1e-6, obs) - mdp::poi_loglik(base, theta - 1e-6, obs)) / 2e-6;
        worst_poi = std::max(worst_poi, std::abs(g - fd) / std::max(1.0, std::abs(fd)));
    }
    o.check(worst_poi <= 1e-5, fmt("POI log-likelihood gradient max rel error %.2e", worst_poi));
    return o;
}

Outcome determinism() {
    Outcome o;
    const char* configs[] = {
        "experiment: bandit\npreset: gaussian15-informative\nalgorithms: [sgld-ts, exact-ts, ucb1, bayes-ucb, "
        "eps-greedy]\nhorizon: 200\nseeds: [5, 6]\n",
        "experiment: bandit\npreset: laplace10-informative\nalgorithms: [sgld-ts, ucb1]\nhorizon: 200\nseeds: [5]\n",
        "experiment: mdp\npreset: riverswim\nalgorithms: [mld-psrl, ds-psrl, db-psrl, tsde, optimal]\nhorizon: "
        "500\nseeds: [5, 6]\n",
        "experiment: mdp\npreset: poi5\nalgorithms: [sgld-psrl, mld-psrl]\nhorizon: 300\nseeds: [5]\n",
    };
    int identical = 0, total = 0;
    for (const char* text : configs) {
        const auto cfg = config(text);
        std::ostringstream a, b, c;
        harness::write_csv(harness::run_experiment(cfg, 1), cfg.kind, a);
        harness::write_csv(harness::run_experiment(cfg, 1), cfg.kind, b);
        harness::write_csv(harness::run_experiment(cfg, 3), cfg.kind, c);
        total += 2;
        identical += a.str() == b.str();
        identical += a.str() == c.str();
    }
    o.check(identical == total, fmt("%.0f/%.0f replays byte-identical (incl. 3 workers)", identical, total));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sampler-oracles", sampler_oracles},   {"gaussian-bandit", gaussian_bandit},
        {"communication-cost", communication_cost}, {"laplace-bandit", laplace_bandit},
        {"riverswim", riverswim},               {"planner", planner},
        {"batching-invariants", batching_suite}, {"gradient-checks", gradient_checks},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %-20s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
