#include <set>

#include <gtest/gtest.h>

#include "lts/random.hpp"

using namespace lts;

TEST(Random, SameSeedSameStream) {
    Rng a = make_rng(42), b = make_rng(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Random, DerivedSeedsDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t parent = 0; parent < 50; ++parent)
        for (std::uint64_t child = 0; child < 50; ++child) seen.insert(derive_seed(parent, child));
    EXPECT_EQ(seen.size(), 2500u);
}

TEST(Random, NamedSubstreamsDiffer) {
    Rng env = substream(7, "env");
    Rng agent = substream(7, "agent");
    EXPECT_NE(env(), agent());
}

TEST(Random, HashTagIsFnv1a) {
    // FNV-1a 64 of "a"
    EXPECT_EQ(hash_tag("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hash_tag(""), 0xcbf29ce484222325ULL);
}

TEST(Random, Uniform01InRange) {
    Rng rng = make_rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = uniform01(rng);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
