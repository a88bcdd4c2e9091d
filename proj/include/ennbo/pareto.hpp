#ifndef ENNBO_PARETO_HPP
#define ENNBO_PARETO_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ennbo/core.hpp"

namespace ennbo {

/// Candidate designs with their surrogate mean and uncertainty, index-aligned.
struct CandidatePool {
    std::vector<Design> designs;
    std::vector<double> mus;
    std::vector<double> sigmas;

    std::size_t size() const { return mus.size(); }

    void validate() const {
        if (mus.empty() || mus.size() != sigmas.size() || mus.size() != designs.size()) {
            throw std::invalid_argument("CandidatePool: designs, mus and sigmas must share a nonzero length");
        }
    }
};

/// Successive non-dominated layers; layer 0 is the Pareto front of the pool.
struct ParetoPartition {
    std::vector<std::vector<std::size_t>> layers;

    std::size_t covered() const {
        std::size_t n = 0;
        for (const auto& l : layers) {
            n += l.size();
        }
        return n;
    }
};

struct Objectives {
    double mu;
    double sigma;
};

/// Both objectives are maximized; identical points never dominate each other.
inline bool dominates(Objectives a, Objectives b) {
    return a.mu >= b.mu && a.sigma >= b.sigma && (a.mu > b.mu || a.sigma > b.sigma);
}

namespace detail {

// Non-dominated subset of `subset` in O(n log n). After sorting by mu then
// sigma (both descending) every potential dominator of a point precedes it,
// and an earlier point with a different (mu, sigma) dominates it exactly
// when its sigma is at least as large. Exact duplicates are handled as a
// group so that copies never eliminate each other. Returns ascending indices.
inline std::vector<std::size_t> front_of(const std::vector<double>& mus, const std::vector<double>& sigmas,
                                         std::vector<std::size_t> subset) {
    std::sort(subset.begin(), subset.end(), [&](std::size_t a, std::size_t b) {
        if (mus[a] != mus[b]) {
            return mus[a] > mus[b];
        }
        if (sigmas[a] != sigmas[b]) {
            return sigmas[a] > sigmas[b];
        }
        return a < b;
    });

    std::vector<std::size_t> front;
    bool have_prev = false;
    double max_prev_sigma = 0.0;
    std::size_t g = 0;
    while (g < subset.size()) {
        std::size_t end = g + 1;
        while (end < subset.size() && mus[subset[end]] == mus[subset[g]] &&
               sigmas[subset[end]] == sigmas[subset[g]]) {
            ++end;
        }
        double s = sigmas[subset[g]];
        if (!have_prev || max_prev_sigma < s) {
            front.insert(front.end(), subset.begin() + static_cast<std::ptrdiff_t>(g),
                         subset.begin() + static_cast<std::ptrdiff_t>(end));
        }
        if (!have_prev || s > max_prev_sigma) {
            max_prev_sigma = s;
        }
        have_prev = true;
        g = end;
    }
    std::sort(front.begin(), front.end());
    return front;
}

} // namespace detail

inline std::vector<std::size_t> first_front(const std::vector<double>& mus, const std::vector<double>& sigmas) {
    if (mus.empty() || mus.size() != sigmas.size()) {
        throw std::invalid_argument("first_front: mus and sigmas must share a nonzero length");
    }
    std::vector<std::size_t> all(mus.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return detail::front_of(mus, sigmas, std::move(all));
}

inline std::vector<std::size_t> first_front(const CandidatePool& pool) {
    pool.validate();
    return first_front(pool.mus, pool.sigmas);
}

/// Peels fronts until at least `needed` indices are covered; deeper layers
/// are left uncomputed.
inline ParetoPartition pareto_partition(const std::vector<double>& mus, const std::vector<double>& sigmas,
                                        std::size_t needed) {
    if (mus.empty() || mus.size() != sigmas.size()) {
        throw std::invalid_argument("pareto_partition: mus and sigmas must share a nonzero length");
    }
    if (needed > mus.size()) {
        throw std::invalid_argument("pareto_partition: needed (" + std::to_string(needed) +
                                    ") exceeds pool size (" + std::to_string(mus.size()) + ")");
    }
    ParetoPartition part;
    std::vector<std::size_t> remaining(mus.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::size_t covered = 0;
    while (covered < needed) {
        auto layer = detail::front_of(mus, sigmas, remaining);
        std::vector<std::size_t> rest;
        rest.reserve(remaining.size() - layer.size());
        std::set_difference(remaining.begin(), remaining.end(), layer.begin(), layer.end(),
                            std::back_inserter(rest));
        remaining = std::move(rest);
        covered += layer.size();
        part.layers.push_back(std::move(layer));
    }
    return part;
}

inline ParetoPartition pareto_partition(const CandidatePool& pool, std::size_t needed) {
    pool.validate();
    return pareto_partition(pool.mus, pool.sigmas, needed);
}

/// Draws `n_arms` distinct pool indices: uniformly without replacement from
/// layer 0, then from layer 1 once layer 0 is exhausted, and so on. Indices
/// are returned in draw order. All randomness comes from `rng`.
inline std::vector<std::size_t> select_arm_indices(const CandidatePool& pool, std::size_t n_arms, RngStream& rng) {
    pool.validate();
    if (n_arms > pool.size()) {
        throw std::invalid_argument("select_arms: n_arms (" + std::to_string(n_arms) + ") exceeds pool size (" +
                                    std::to_string(pool.size()) + ")");
    }
    auto part = pareto_partition(pool, n_arms);
    std::vector<std::size_t> arms;
    arms.reserve(n_arms);
    for (auto& layer : part.layers) {
        while (!layer.empty() && arms.size() < n_arms) {
            auto pick = static_cast<std::size_t>(rng.below(layer.size()));
            arms.push_back(layer[pick]);
            layer[pick] = layer.back();
            layer.pop_back();
        }
    }
    return arms;
}

inline std::vector<Design> select_arms(const CandidatePool& pool, std::size_t n_arms, RngStream& rng) {
    std::vector<Design> out;
    for (auto i : select_arm_indices(pool, n_arms, rng)) {
        out.push_back(pool.designs[i]);
    }
    return out;
}

/// The `n` indices ranking highest by (primary desc, secondary desc, index asc).
/// Used by the single-objective ablations.
inline std::vector<std::size_t> top_indices(const std::vector<double>& primary, const std::vector<double>& secondary,
                                            std::size_t n) {
    if (primary.size() != secondary.size() || n > primary.size()) {
        throw std::invalid_argument("top_indices: bad sizes");
    }
    std::vector<std::size_t> idx(primary.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto better = [&](std::size_t a, std::size_t b) {
        if (primary[a] != primary[b]) {
            return primary[a] > primary[b];
        }
        if (secondary[a] != secondary[b]) {
            return secondary[a] > secondary[b];
        }
        return a < b;
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(), better);
    idx.resize(n);
    return idx;
}

} // namespace ennbo

#endif
