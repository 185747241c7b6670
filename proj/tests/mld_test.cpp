#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lts/random.hpp"
#include "lts/samplers/mirror.hpp"
#include "lts/samplers/mld.hpp"
#include "stats_oracle.hpp"

using namespace lts;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

/// Central differences of W evaluated through U and the Hessian log-det.
Vector finite_difference_grad(const Vector& omega, const DirichletRowPosterior& post, double h = 1e-5) {
    Vector g(omega.size());
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        Vector up = omega, down = omega;
        up[i] += h;
        down[i] -= h;
        g[i] = (dual_potential(up, post) - dual_potential(down, post)) / (2.0 * h);
    }
    return g;
}

double relative_error(const Vector& got, const Vector& want) {
    return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace

TEST(DualPotentialGrad, SymmetricPosteriorHasZeroGradientAtOrigin) {
    const auto post = DirichletRowPosterior::from_counts(vec({1, 1}), vec({1, 1}));
    EXPECT_NEAR(dual_potential_grad(Vector::Zero(1), post)[0], 0.0, 1e-15);
}

TEST(DualPotentialGrad, CountsPushTowardObservedCategory) {
    const auto post = DirichletRowPosterior::from_counts(vec({1, 1}), vec({10, 0}));
    const Vector fd = finite_difference_grad(Vector::Zero(1), post);
    EXPECT_GT(-fd[0], 0.0);
    EXPECT_GT(-dual_potential_grad(Vector::Zero(1), post)[0], 0.0);
}

TEST(DualPotentialGradProperty, MatchesFiniteDifferences) {
    Rng rng = make_rng(17);
    for (int i = 0; i < 100; ++i) {
        const int K = 2 + static_cast<int>(5 * uniform01(rng));
        Vector alpha(K);
        for (int k = 0; k < K; ++k) alpha[k] = 0.5 + std::floor(30.0 * uniform01(rng));
        const DirichletRowPosterior post(alpha);
        Vector omega(K - 1);
        for (int k = 0; k < K - 1; ++k) omega[k] = 4.0 * (uniform01(rng) - 0.5);
        EXPECT_LE(relative_error(dual_potential_grad(omega, post), finite_difference_grad(omega, post)), 1e-5)
            << "instance " << i;
    }
}

TEST(DualPotentialGrad, WrongDimensionRejected) {
    const DirichletRowPosterior post(vec({1, 1, 1}));
    EXPECT_THROW(dual_potential_grad(Vector::Zero(1), post), std::invalid_argument);
}

TEST(MldConfig, StepAndBudget) {
    const MldConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.step_size(63.0), 0.1 / 63.0);
    EXPECT_EQ(cfg.num_iters(0), 500u);
    EXPECT_EQ(cfg.num_iters(60), 3000u);
    MldConfig sa = cfg;
    sa.budget = MldBudget::kStateAction;
    EXPECT_EQ(sa.num_iters(60, 5, 2), 30000u);
}

namespace {

/// Independent MLD draws, each from a fresh chain at the posterior mean.
std::vector<Vector> mld_draws(const DirichletRowPosterior& post, std::size_t n_obs, int draws, std::uint64_t seed) {
    const MldConfig cfg;
    Rng rng = make_rng(seed);
    std::vector<Vector> out;
    for (int i = 0; i < draws; ++i)
        out.push_back(run_mld(post, cfg.num_iters(n_obs), cfg.step_size(post.total()), std::nullopt, rng).theta);
    return out;
}

Vector mean_vector(const std::vector<Vector>& xs) {
    Vector m = Vector::Zero(xs.front().size());
    for (const auto& x : xs) m += x;
    return m / static_cast<double>(xs.size());
}

}  // namespace

TEST(RunMld, FlatPriorMeanIsUniform) {
    const DirichletRowPosterior post(vec({1, 1, 1}));
    const Vector m = mean_vector(mld_draws(post, 0, 10'000, 1));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(m[k], 1.0 / 3.0, 0.02);
}

TEST(RunMld, MatchesExactDirichletMoments) {
    const auto post = DirichletRowPosterior::from_counts(vec({1, 1, 1}), vec({40, 10, 10}));
    const auto draws = mld_draws(post, 60, 10'000, 2);
    const Vector m = mean_vector(draws);
    const Vector want = vec({41.0 / 63, 11.0 / 63, 11.0 / 63});
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(m[k], want[k], 0.02);

    // second moment against exact Dirichlet draws
    Rng rng = make_rng(3);
    std::vector<double> got0, exact0;
    for (const auto& d : draws) got0.push_back(d[0]);
    for (int i = 0; i < 10'000; ++i) exact0.push_back(sample_dirichlet(post.alpha(), rng)[0]);
    EXPECT_NEAR(std::sqrt(lts_test::var_of(got0)), std::sqrt(lts_test::var_of(exact0)), 0.01);
}

TEST(RunMld, OutputsStayInsideSimplex) {
    const auto post = DirichletRowPosterior::from_counts(vec({1, 1, 1, 1}), vec({200, 0, 3, 0}));
    Rng rng = make_rng(5);
    std::optional<Vector> warm;
    for (int i = 0; i < 500; ++i) {
        const MldSample s = run_mld(post, 50, 0.1 / post.total(), warm, rng);
        warm = s.omega;
        EXPECT_TRUE((s.theta.array() > 0.0).all());
        EXPECT_NEAR(s.theta.sum(), 1.0, 1e-12);
    }
}

TEST(RunMld, WarmStartDimensionChecked) {
    const DirichletRowPosterior post(vec({1, 1, 1}));
    Rng rng = make_rng(5);
    EXPECT_THROW(run_mld(post, 10, 0.01, Vector::Zero(3), rng), std::invalid_argument);
    EXPECT_THROW(run_mld(post, 10, 0.0, std::nullopt, rng), std::invalid_argument);
}

TEST(RunMld, ZeroIterationsReturnsWarmStartImage) {
    const DirichletRowPosterior post(vec({2, 3, 5}));
    Rng rng = make_rng(5);
    const Vector warm = vec({0.4, -0.1});
    const MldSample s = run_mld(post, 0, 0.01, warm, rng);
    EXPECT_EQ(s.omega, warm);
    EXPECT_LE((s.theta.head(2) - entropic::inverse(warm)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SampleDirichlet, ConcentratedRowNearMean) {
    Rng rng = make_rng(6);
    const Vector alpha = vec({1e6, 1, 1, 1, 1});
    const Vector mean = alpha / alpha.sum();
    for (int i = 0; i < 100; ++i) {
        const Vector d = sample_dirichlet(alpha, rng);
        EXPECT_LE((d - mean).cwiseAbs().maxCoeff(), 0.01);
    }
}
