#ifndef ENNBO_ENN_HPP
#define ENNBO_ENN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ennbo/core.hpp"

namespace ennbo {

/// Default neighbor count of the principal configuration (turbo-enn-10).
inline constexpr std::size_t kDefaultNeighbors = 10;

struct Neighbor {
    std::size_t index = 0;
    double d2 = 0.0;
    double y = 0.0;
};

/// Neighbors sorted by squared distance ascending, lower dataset index first on ties.
struct NeighborSet {
    std::vector<Neighbor> entries;

    std::size_t k() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// Counts distance evaluations so tests can check the scan visits each
/// observation exactly once per query.
struct KnnStats {
    std::size_t distance_evaluations = 0;
};

namespace detail {

inline void check_query(const Dataset& ds, std::span<const double> query, std::size_t k) {
    if (ds.empty()) {
        throw std::invalid_argument("knn: dataset is empty");
    }
    if (k == 0) {
        throw std::invalid_argument("knn: K must be at least 1");
    }
    if (query.size() != ds.dimension()) {
        throw std::invalid_argument("knn: query has dimension " + std::to_string(query.size()) +
                                    ", dataset has " + std::to_string(ds.dimension()));
    }
}

} // namespace detail

/// Exact K nearest neighbors by one linear pass. K > N clamps to N.
inline NeighborSet knn(const Dataset& ds, std::span<const double> query, std::size_t k, KnnStats* stats = nullptr) {
    detail::check_query(ds, query, k);
    const std::size_t n = ds.size();
    const std::size_t dim = ds.dimension();
    const std::size_t keep = std::min(k, n);

    NeighborSet out;
    auto& best = out.entries;
    best.reserve(keep + 1);

    for (std::size_t i = 0; i < n; ++i) {
        const double* row = ds.coords(i).data();
        double d2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double diff = row[j] - query[j];
            d2 += diff * diff;
        }
        // Indices arrive in increasing order, so a strict comparison keeps the
        // lower index on distance ties.
        if (best.size() == keep && !(d2 < best.back().d2)) {
            continue;
        }
        auto pos = std::upper_bound(best.begin(), best.end(), d2,
                                    [](double v, const Neighbor& nb) { return v < nb.d2; });
        best.insert(pos, Neighbor{i, d2, ds.value(i)});
        if (best.size() > keep) {
            best.pop_back();
        }
    }
    if (stats != nullptr) {
        stats->distance_evaluations += n;
    }
    return out;
}

inline NeighborSet knn(const Dataset& ds, const Design& query, std::size_t k, KnnStats* stats = nullptr) {
    return knn(ds, query.coords(), k, stats);
}

/// Precision-weighted combination of the neighbors' estimates, each neighbor
/// contributing mean y_i and variance d_i^2:
///
///   mu = sum(y_i / d2_i) / sum(1 / d2_i),   sigma2 = 1 / sum(1 / d2_i)
///
/// The formula is singular at d2 = 0. Neighbors that coincide with the query
/// take all the weight: mu is their mean value and sigma2 is zero.
inline Estimate enn_estimate(const NeighborSet& nbrs) {
    if (nbrs.empty()) {
        throw std::invalid_argument("enn_estimate: neighbor set is empty");
    }
    const auto& e = nbrs.entries;
    if (e.front().d2 == 0.0) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& nb : e) {
            if (nb.d2 != 0.0) {
                break;
            }
            sum += nb.y;
            ++count;
        }
        return {sum / static_cast<double>(count), 0.0};
    }

    double weight_sum = 0.0;
    double weighted_y = 0.0;
    for (const auto& nb : e) {
        double w = 1.0 / nb.d2;
        weight_sum += w;
        weighted_y += w * nb.y;
    }
    if (std::isinf(weight_sum)) {
        // Subnormal distances overflow the precision; that is the coincident limit.
        const double nearest = e.front().d2;
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& nb : e) {
            if (nb.d2 != nearest) {
                break;
            }
            sum += nb.y;
            ++count;
        }
        return {sum / static_cast<double>(count), 0.0};
    }
    // Rounding can land an ulp outside bounds that hold exactly.
    double lo = e.front().y;
    double hi = lo;
    for (const auto& nb : e) {
        lo = std::min(lo, nb.y);
        hi = std::max(hi, nb.y);
    }
    return {std::clamp(weighted_y / weight_sum, lo, hi), std::min(1.0 / weight_sum, e.front().d2)};
}

/// ENN surrogate query. There is nothing to fit: the dataset is the model.
inline Estimate query(const Dataset& ds, std::span<const double> x, std::size_t k, KnnStats* stats = nullptr) {
    return enn_estimate(knn(ds, x, k, stats));
}

inline Estimate query(const Dataset& ds, const Design& x, std::size_t k, KnnStats* stats = nullptr) {
    return query(ds, x.coords(), k, stats);
}

} // namespace ennbo

#endif
