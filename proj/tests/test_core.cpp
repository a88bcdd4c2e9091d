#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "ennbo/core.hpp"
#include "ennbo/rng.hpp"

using namespace ennbo;

TEST(SquaredDistance, IdentityIsZero) { EXPECT_EQ(squared_distance(Design({0.0, 0.0}), Design({0.0, 0.0})), 0.0); }

TEST(SquaredDistance, UnitOffsets) { EXPECT_EQ(squared_distance(Design({0.0, 0.0}), Design({1.0, 1.0})), 2.0); }

TEST(SquaredDistance, HandSum) {
    // 0.2^2 + 0.5^2 + 0.8^2
    EXPECT_NEAR(squared_distance(Design({0.3, 0.7, 0.1}), Design({0.5, 0.2, 0.9})), 0.93, 1e-15);
}

TEST(SquaredDistance, DimensionMismatchThrows) {
    EXPECT_THROW(squared_distance(Design({0.1}), Design({0.1, 0.2})), std::invalid_argument);
}

TEST(SquaredDistance, SymmetricAndZeroOnSelf) {
    RngStream rng(7, 0);
    for (int t = 0; t < 1000; ++t) {
        std::size_t d = 1 + rng.below(20);
        Design a = uniform_design(d, rng);
        Design b = uniform_design(d, rng);
        EXPECT_EQ(squared_distance(a, b), squared_distance(b, a));
        EXPECT_EQ(squared_distance(a, a), 0.0);
        EXPECT_GT(squared_distance(a, b), 0.0);
    }
}

TEST(Design, RejectsOutOfCube) {
    EXPECT_THROW(Design({0.5, 1.5}), std::invalid_argument);
    EXPECT_THROW(Design({-0.1}), std::invalid_argument);
    EXPECT_THROW(Design({std::nan("")}), std::invalid_argument);
    EXPECT_THROW(Design(std::vector<double>{}), std::invalid_argument);
    EXPECT_NO_THROW(Design({0.0, 1.0}));
}

TEST(Dataset, AppendGrowsAndPreservesOrder) {
    Dataset ds(2);
    ds = dataset_append(ds, {Design({0.1, 0.2}), 1.0});
    EXPECT_EQ(ds.size(), 1u);
    for (int i = 1; i < 5; ++i) {
        ds.append({Design({0.1 * i, 0.2}), static_cast<double>(i)});
    }
    ASSERT_EQ(ds.size(), 5u);
    Dataset before = ds;
    ds.append({Design({0.9, 0.9}), 42.0});
    ASSERT_EQ(ds.size(), 6u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(ds.value(i), before.value(i));
        EXPECT_EQ(ds.coords(i)[0], before.coords(i)[0]);
    }
    EXPECT_EQ(ds.value(5), 42.0);
}

TEST(Dataset, RejectsNonFiniteAndMismatch) {
    Dataset ds(2);
    EXPECT_THROW(ds.append({Design({0.1, 0.2}), std::nan("")}), std::invalid_argument);
    EXPECT_THROW(ds.append({Design({0.1, 0.2}), std::numeric_limits<double>::infinity()}), std::invalid_argument);
    EXPECT_THROW(ds.append({Design({0.1}), 1.0}), std::invalid_argument);
    EXPECT_EQ(ds.size(), 0u);
}

TEST(RngStream, SameSeedAndStreamReproduce) {
    RngStream a(123, 4);
    RngStream b(123, 4);
    for (int i = 0; i < 10000; ++i) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
}

TEST(RngStream, FrozenFirstDraws) {
    // Pinned so a change in the generator is caught on any platform.
    RngStream r(0, 0);
    EXPECT_EQ(r.next_u64(), 0x7f864ac873fb2707ULL);
    EXPECT_EQ(r.next_u64(), 0xa172800554e3d2f1ULL);
    RngStream other(42, 7);
    EXPECT_EQ(other.next_u64(), 0x6a8f76c89aed87bfULL);
    EXPECT_EQ(other.next_u64(), 0xc6132e6c33826d4fULL);
}

TEST(RngStream, StreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 100; ++s) {
        firsts.insert(RngStream(5, s).next_u64());
    }
    EXPECT_EQ(firsts.size(), 100u);
}

TEST(RngStream, UniformRangesAndBelow) {
    RngStream r(9, 9);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        double o = r.uniform_open();
        ASSERT_GT(o, 0.0);
        ASSERT_LT(o, 1.0);
        ++counts[r.below(7)];
    }
    for (int c : counts) {
        // 10000 expected, sd ~ 93
        EXPECT_NEAR(c, 10000, 500);
    }
    EXPECT_THROW(r.below(0), std::invalid_argument);
}
