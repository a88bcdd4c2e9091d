#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ennbo/enn.hpp"
#include "oracles.hpp"

using namespace ennbo;

namespace {

Dataset line_dataset(std::initializer_list<std::pair<double, double>> pts) {
    Dataset ds(1);
    for (auto [x, y] : pts) {
        ds.append({Design({x}), y});
    }
    return ds;
}

void expect_rel(double got, double want, double rel) {
    EXPECT_LE(std::abs(got - want), rel * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

} // namespace

TEST(Knn, ClampsKToN) {
    auto ds = line_dataset({{0.5, 1.0}});
    auto nb = knn(ds, Design({0.1}), 3);
    EXPECT_EQ(nb.k(), 1u);
}

TEST(Knn, OrdersByDistance) {
    auto ds = line_dataset({{0.0, 0.0}, {0.4, 1.0}, {1.0, 2.0}});
    auto nb = knn(ds, Design({0.35}), 2);
    ASSERT_EQ(nb.k(), 2u);
    EXPECT_EQ(nb.entries[0].index, 1u);
    EXPECT_EQ(nb.entries[1].index, 0u);
}

TEST(Knn, TiesGoToLowerIndex) {
    auto ds = line_dataset({{0.25, 0.0}, {0.75, 1.0}, {0.25, 2.0}, {0.75, 3.0}});
    auto nb = knn(ds, Design({0.5}), 3);
    ASSERT_EQ(nb.k(), 3u);
    EXPECT_EQ(nb.entries[0].index, 0u);
    EXPECT_EQ(nb.entries[1].index, 1u);
    EXPECT_EQ(nb.entries[2].index, 2u);
}

TEST(Knn, MatchesFullSortOracle) {
    RngStream rng(11, 0);
    auto ds = oracle::random_dataset(50, 5, rng);
    auto q = oracle::random_point(5, rng);
    auto nb = knn(ds, q, 7);
    auto all = oracle::full_sort(ds, q);
    ASSERT_EQ(nb.k(), 7u);
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(nb.entries[i].index, all[i].index);
        EXPECT_EQ(nb.entries[i].d2, all[i].d2);
    }
}

TEST(Knn, Errors) {
    Dataset empty(2);
    EXPECT_THROW(knn(empty, Design({0.1, 0.1}), 1), std::invalid_argument);
    auto ds = line_dataset({{0.5, 1.0}});
    EXPECT_THROW(knn(ds, Design({0.1, 0.2}), 1), std::invalid_argument);
    EXPECT_THROW(knn(ds, Design({0.1}), 0), std::invalid_argument);
}

TEST(Knn, SinglePassOverDataset) {
    RngStream rng(3, 3);
    auto ds = oracle::random_dataset(137, 4, rng);
    KnnStats stats;
    query(ds, oracle::random_point(4, rng), 10, &stats);
    EXPECT_EQ(stats.distance_evaluations, 137u);
}

TEST(EnnEstimate, SingleNeighbor) {
    NeighborSet nb{{{0, 0.25, 2.0}}};
    auto e = enn_estimate(nb);
    EXPECT_EQ(e.mu, 2.0);
    EXPECT_EQ(e.sigma2, 0.25);
}

TEST(EnnEstimate, TwoEquidistantNeighbors) {
    NeighborSet nb{{{0, 1.0, 0.0}, {1, 1.0, 4.0}}};
    auto e = enn_estimate(nb);
    EXPECT_EQ(e.mu, 2.0);
    EXPECT_EQ(e.sigma2, 0.5);
}

TEST(EnnEstimate, FiveRandomNeighborsMatchFormula) {
    RngStream rng(5, 1);
    auto ds = oracle::random_dataset(5, 3, rng);
    auto q = oracle::random_point(3, rng);
    auto e = query(ds, q, 5);
    auto [mu, s2] = oracle::enn(ds, q, 5);
    expect_rel(e.mu, mu, 1e-12);
    expect_rel(e.sigma2, s2, 1e-12);
}

TEST(EnnEstimate, EmptyThrows) { EXPECT_THROW(enn_estimate(NeighborSet{}), std::invalid_argument); }

TEST(EnnEstimate, DuplicatesAverage) {
    NeighborSet nb{{{0, 0.0, 1.0}, {3, 0.0, 3.0}, {1, 0.5, 100.0}}};
    auto e = enn_estimate(nb);
    EXPECT_EQ(e.mu, 2.0);
    EXPECT_EQ(e.sigma2, 0.0);
}

TEST(Query, AtObservedPointInterpolates) {
    auto ds = line_dataset({{0.1, 5.0}, {0.7, -3.0}, {0.9, 1.0}});
    auto e = query(ds, Design({0.7}), 3);
    EXPECT_EQ(e.mu, -3.0);
    EXPECT_EQ(e.sigma2, 0.0);
}

TEST(Query, SingleObservation) {
    auto ds = line_dataset({{0.25, 7.5}});
    auto e = query(ds, Design({0.75}), 10);
    EXPECT_EQ(e.mu, 7.5);
    EXPECT_EQ(e.sigma2, 0.25);
}

TEST(Query, TwoHundredObservationsAgainstOracle) {
    RngStream rng(200, 20);
    auto ds = oracle::random_dataset(200, 6, rng);
    for (int t = 0; t < 20; ++t) {
        auto q = oracle::random_point(6, rng);
        auto e = query(ds, q, 10);
        auto [mu, s2] = oracle::enn(ds, q, 10);
        expect_rel(e.mu, mu, 1e-12);
        expect_rel(e.sigma2, s2, 1e-12);
    }
}

TEST(Query, ApproachesObservationContinuously) {
    auto ds = line_dataset({{0.2, 1.0}, {0.5, 4.0}, {0.8, -2.0}});
    double prev_s2 = 1.0;
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-6}) {
        auto e = query(ds, Design({0.5 + eps}), 3);
        EXPECT_LT(e.sigma2, prev_s2);
        EXPECT_LE(std::abs(e.mu - 4.0), 100.0 * eps);
        prev_s2 = e.sigma2;
    }
}

TEST(Query, PropertiesOverRandomCases) {
    RngStream rng(99, 0);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = 1 + rng.below(60);
        std::size_t d = 1 + rng.below(8);
        auto ds = oracle::random_dataset(n, d, rng);
        auto q = oracle::random_point(d, rng);
        std::size_t k = 1 + rng.below(15);
        auto nb = knn(ds, q, k);
        auto e = enn_estimate(nb);
        double lo = nb.entries.front().y;
        double hi = lo;
        for (const auto& x : nb.entries) {
            lo = std::min(lo, x.y);
            hi = std::max(hi, x.y);
        }
        EXPECT_GE(e.mu, lo);
        EXPECT_LE(e.mu, hi);
        EXPECT_LE(e.sigma2, nb.entries.front().d2);
        EXPECT_LE(query(ds, q, k + 1).sigma2, e.sigma2);
    }
}
