#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lts/bandit/batching.hpp"
#include "lts/random.hpp"

using namespace lts;
using namespace lts::bandit;

namespace {

std::vector<std::uint64_t> boundaries_of(std::size_t arms, const std::vector<std::size_t>& pulls) {
    DynamicDoublingState st(arms);
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < pulls.size(); ++i)
        if (st.update(pulls[i])) out.push_back(i + 1);
    return out;
}

}  // namespace

TEST(DynamicDoubling, TwoArmHandTrace) {
    // arms are 0-based here: sequence [1,2,1,1,2] -> [0,1,0,0,1]
    EXPECT_EQ(boundaries_of(2, {0, 1, 0, 0, 1}), (std::vector<std::uint64_t>{1, 2, 3, 5}));
}

TEST(DynamicDoubling, SingleArmSevenSteps) {
    EXPECT_EQ(boundaries_of(1, std::vector<std::size_t>(7, 0)), (std::vector<std::uint64_t>{1, 2, 4}));
    // 3 boundaries plus the trailing partial batch (steps 5..7)
    BatchClock clock(BatchScheme::kDynamic, 1, 7);
    std::uint64_t closed = 0;
    bool open = false;
    for (int t = 1; t <= 7; ++t) {
        const bool b = clock.step(0);
        closed += b;
        open = !b;
    }
    EXPECT_EQ(closed + (open ? 1 : 0), 4u);
}

TEST(DynamicDoubling, TriggeringArmCountIsPowerOfTwo) {
    Rng rng = make_rng(5);
    DynamicDoublingState st(4);
    for (int t = 0; t < 500; ++t) {
        const std::size_t a = static_cast<std::size_t>(4 * uniform01(rng));
        if (st.update(a)) {
            EXPECT_EQ(st.pulls()[a], std::uint64_t{1} << (st.exponents()[a] - 1));
        }
    }
}

TEST(DynamicDoublingProperty, PullsAtMostDoubleSinceBoundary) {
    Rng rng = make_rng(123);
    for (int run = 0; run < 1000; ++run) {
        const std::size_t N = 1 + static_cast<std::size_t>(8 * uniform01(rng));
        const std::uint64_t T = 1 + static_cast<std::uint64_t>(400 * uniform01(rng));
        // skewed arm preferences so some arms get many pulls
        std::vector<double> w(N);
        for (auto& x : w) x = std::pow(uniform01(rng), 3.0) + 1e-3;
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        DynamicDoublingState st(N);
        for (std::uint64_t t = 1; t <= T; ++t) {
            st.update(pick(rng));
            for (std::size_t a = 0; a < N; ++a) {
                const auto k_t = st.pulls()[a];
                const auto k_b = st.pulls_at_last_boundary()[a];
                ASSERT_LE(k_b, k_t);
                ASSERT_LE(k_t, 2 * k_b) << "run " << run << " t " << t << " arm " << a;
            }
        }
    }
}

TEST(DynamicDoublingProperty, BatchCountWithinBound) {
    Rng rng = make_rng(321);
    for (int run = 0; run < 1000; ++run) {
        const std::size_t N = 1 + static_cast<std::size_t>(20 * uniform01(rng));
        const std::uint64_t T = 1 + static_cast<std::uint64_t>(2000 * uniform01(rng));
        BatchClock clock(BatchScheme::kDynamic, N, T);
        std::uint64_t boundaries = 0;
        bool open = false;
        for (std::uint64_t t = 1; t <= T; ++t) {
            const bool b = clock.step(static_cast<std::size_t>(N * uniform01(rng)));
            boundaries += b;
            open = !b;
        }
        ASSERT_LE(boundaries, dynamic_batch_bound(N, T)) << "N " << N << " T " << T;
        // a trailing partial batch can add one when the last boundary lands early
        ASSERT_LE(boundaries + (open ? 1 : 0), dynamic_batch_bound(N, T) + 1);
    }
}

TEST(DynamicBatchBound, Formula) {
    EXPECT_EQ(dynamic_batch_bound(15, 650), 15u * 10u);
    EXPECT_EQ(dynamic_batch_bound(1, 7), 3u);
}

TEST(StaticBatches, Examples) {
    EXPECT_EQ(static_batch_boundaries(650).size(), 9u);
    EXPECT_EQ(static_batch_boundaries(2), (std::vector<std::uint64_t>{2}));
    EXPECT_EQ(static_batch_boundaries(6), (std::vector<std::uint64_t>{2, 6}));
    EXPECT_EQ(static_batch_boundaries(1), (std::vector<std::uint64_t>{1}));
    EXPECT_THROW(static_batch_boundaries(0), std::invalid_argument);
}

TEST(StaticBatches, SizesDouble) {
    const auto b = static_batch_boundaries(1000);
    std::uint64_t prev = 0, size = 2;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        EXPECT_EQ(b[i] - prev, size);
        prev = b[i];
        size *= 2;
    }
    EXPECT_EQ(b.back(), 1000u);
}

TEST(BatchClock, SequentialClosesEveryStep) {
    BatchClock clock(BatchScheme::kSequential, 3, 10);
    for (int t = 0; t < 10; ++t) EXPECT_TRUE(clock.step(static_cast<std::size_t>(t % 3)));
}

TEST(BatchScheme, ParseRoundTrip) {
    for (auto s : {BatchScheme::kSequential, BatchScheme::kDynamic, BatchScheme::kStatic})
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_THROW(parse_scheme("weekly"), std::invalid_argument);
}
