#include <gtest/gtest.h>

#include <cmath>

#include "ennbo/trust_region.hpp"

using namespace ennbo;

namespace {

Observation obs(std::vector<double> x, double y) { return {Design(std::move(x)), y}; }

TrustRegionState with_center(double c, double side, std::size_t d = 3) {
    auto st = tr_init(d, obs(std::vector<double>(d, c), 0.0));
    st.side_length = side;
    return st;
}

} // namespace

TEST(TrInit, Constants) {
    auto st = tr_init(12, obs(std::vector<double>(12, 0.3), -4.5));
    EXPECT_EQ(st.side_length, 0.8);
    EXPECT_EQ(st.success_count, 0u);
    EXPECT_EQ(st.failure_count, 0u);
    EXPECT_EQ(st.incumbent_value, -4.5);
    EXPECT_EQ(st.failure_tolerance, 12u);
    auto again = tr_init(12, obs(std::vector<double>(12, 0.3), -4.5));
    EXPECT_EQ(again.side_length, st.side_length);
    EXPECT_EQ(again.incumbent_design, st.incumbent_design);
}

TEST(TrInit, FailureTolerance) {
    EXPECT_EQ(failure_tolerance(2, 1), 4u);
    EXPECT_EQ(failure_tolerance(30, 1), 30u);
    EXPECT_EQ(failure_tolerance(30, 10), 3u);
    EXPECT_EQ(failure_tolerance(30, 7), 5u);
    EXPECT_EQ(failure_tolerance(3, 100), 1u);
}

TEST(TrBounds, Centered) {
    auto b = tr_bounds(with_center(0.5, 0.8));
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(b.lower[j], 0.1, 1e-15);
        EXPECT_NEAR(b.upper[j], 0.9, 1e-15);
    }
}

TEST(TrBounds, ClippedAtZero) {
    auto b = tr_bounds(with_center(0.0, 0.8));
    EXPECT_EQ(b.lower[0], 0.0);
    EXPECT_NEAR(b.upper[0], 0.4, 1e-15);
}

TEST(TrBounds, ClippedAtOne) {
    auto b = tr_bounds(with_center(1.0, 1.6));
    EXPECT_NEAR(b.lower[1], 0.2, 1e-15);
    EXPECT_EQ(b.upper[1], 1.0);
}

TEST(SampleCandidates, InsideBounds) {
    RngStream rng(4, 4);
    auto st = tr_init(5, obs({0.05, 0.5, 0.95, 0.3, 1.0}, 1.0));
    st.side_length = 0.3;
    auto b = tr_bounds(st);
    for (const auto& x : sample_candidates(st, 2000, rng)) {
        for (std::size_t j = 0; j < 5; ++j) {
            ASSERT_GE(x[j], b.lower[j]);
            ASSERT_LE(x[j], b.upper[j]);
        }
    }
}

TEST(SampleCandidates, DegenerateIntervalIsConstant) {
    RngStream rng(1, 0);
    auto st = with_center(1.0, 0.0, 2);
    for (const auto& x : sample_candidates(st, 100, rng)) {
        EXPECT_EQ(x[0], 1.0);
        EXPECT_EQ(x[1], 1.0);
    }
}

TEST(SampleCandidates, MeanNearMidpoint) {
    RngStream rng(10, 10);
    auto st = tr_init(3, obs({0.2, 0.5, 0.9}, 0.0));
    auto b = tr_bounds(st);
    const int n = 10000;
    std::vector<double> sum(3, 0.0);
    for (const auto& x : sample_candidates(st, n, rng)) {
        for (std::size_t j = 0; j < 3; ++j) {
            sum[j] += x[j];
        }
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const double width = b.upper[j] - b.lower[j];
        const double se = width / std::sqrt(12.0 * n);
        EXPECT_NEAR(sum[j] / n, 0.5 * (b.lower[j] + b.upper[j]), 3.0 * se);
    }
}

TEST(TrUpdate, ThreeSuccessesDoubleCapped) {
    auto st = tr_init(2, obs({0.5, 0.5}, 0.0));
    for (int i = 1; i <= 3; ++i) {
        st = tr_update(st, obs({0.5, 0.5}, static_cast<double>(i)));
    }
    EXPECT_EQ(st.side_length, 1.6);
    EXPECT_EQ(st.success_count, 0u);
    for (int i = 4; i <= 6; ++i) {
        st = tr_update(st, obs({0.5, 0.5}, static_cast<double>(i)));
    }
    EXPECT_EQ(st.side_length, kSideMax);
}

TEST(TrUpdate, FailuresHalve) {
    auto st = tr_init(2, obs({0.5, 0.5}, 10.0));
    for (std::size_t i = 0; i + 1 < st.failure_tolerance; ++i) {
        st = tr_update(st, obs({0.1, 0.1}, 1.0));
        EXPECT_EQ(st.side_length, 0.8);
    }
    st = tr_update(st, obs({0.1, 0.1}, 1.0));
    EXPECT_EQ(st.side_length, 0.4);
    EXPECT_EQ(st.failure_count, 0u);
}

TEST(TrUpdate, ImprovementReplacesIncumbent) {
    auto st = tr_init(2, obs({0.5, 0.5}, 1.0));
    st = tr_update(st, obs({0.2, 0.7}, 2.5));
    EXPECT_EQ(st.incumbent_value, 2.5);
    EXPECT_EQ(st.incumbent_design, Design({0.2, 0.7}));
    EXPECT_EQ(st.success_count, 1u);
    // Ties are failures.
    st = tr_update(st, obs({0.3, 0.3}, 2.5));
    EXPECT_EQ(st.failure_count, 1u);
    EXPECT_EQ(st.success_count, 0u);
    EXPECT_EQ(st.incumbent_design, Design({0.2, 0.7}));
}

TEST(TrUpdate, CountersNeverBothPositiveAndIncumbentMonotone) {
    RngStream rng(2, 2);
    auto st = tr_init(4, obs({0.5, 0.5, 0.5, 0.5}, 0.0));
    double prev = st.incumbent_value;
    for (int i = 0; i < 2000 && !tr_should_restart(st); ++i) {
        double before = st.side_length;
        st = tr_update(st, {uniform_design(4, rng), rng.uniform(-1.0, 1.0)});
        EXPECT_FALSE(st.success_count > 0 && st.failure_count > 0);
        EXPECT_GE(st.incumbent_value, prev);
        prev = st.incumbent_value;
        EXPECT_TRUE(st.side_length == before || st.side_length == 2 * before || st.side_length == 0.5 * before ||
                    st.side_length == kSideMax);
    }
}

TEST(TrShouldRestart, Threshold) {
    auto st = tr_init(2, obs({0.5, 0.5}, 0.0));
    EXPECT_FALSE(tr_should_restart(st));
    st.side_length = kSideMin;
    EXPECT_FALSE(tr_should_restart(st));
    st.side_length = kSideMin / 2;
    EXPECT_TRUE(tr_should_restart(st));
}

TEST(TrShouldRestart, ReachedByHalving) {
    auto st = tr_init(2, obs({0.5, 0.5}, 100.0));
    int halvings = 0;
    while (!tr_should_restart(st)) {
        double before = st.side_length;
        st = tr_update(st, obs({0.5, 0.5}, 0.0));
        halvings += st.side_length < before;
    }
    // 0.8 -> 0.4 -> ... -> 0.00625 (< 2^-7)
    EXPECT_EQ(halvings, 7);
}
