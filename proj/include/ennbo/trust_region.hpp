#ifndef ENNBO_TRUST_REGION_HPP
#define ENNBO_TRUST_REGION_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ennbo/core.hpp"

namespace ennbo {

// TuRBO-1 defaults.
inline constexpr double kSideInit = 0.8;
inline constexpr double kSideMax = 1.6;
inline constexpr double kSideMin = 0x1.0p-7;
inline constexpr std::size_t kSuccessTolerance = 3;

/// ceil(max(4, D) / arms_per_round)
inline std::size_t failure_tolerance(std::size_t dimension, std::size_t arms_per_round) {
    if (arms_per_round == 0) {
        throw std::invalid_argument("failure_tolerance: arms_per_round must be positive");
    }
    std::size_t base = std::max<std::size_t>(4, dimension);
    return (base + arms_per_round - 1) / arms_per_round;
}

/// Isotropic box of side `side_length` centered on the incumbent.
struct TrustRegionState {
    double side_length = kSideInit;
    std::size_t success_count = 0;
    std::size_t failure_count = 0;
    std::size_t failure_tolerance = 4;
    double incumbent_value = 0.0;
    Design incumbent_design;
};

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

inline TrustRegionState tr_init(std::size_t dimension, const Observation& incumbent, std::size_t arms_per_round = 1) {
    if (dimension == 0) {
        throw std::invalid_argument("tr_init: dimension must be at least 1");
    }
    if (incumbent.design.dimension() != dimension) {
        throw std::invalid_argument("tr_init: incumbent dimension mismatch");
    }
    TrustRegionState st;
    st.failure_tolerance = failure_tolerance(dimension, arms_per_round);
    st.incumbent_value = incumbent.value;
    st.incumbent_design = incumbent.design;
    return st;
}

inline Box tr_bounds(const TrustRegionState& st) {
    const auto center = st.incumbent_design.coords();
    const double half = 0.5 * st.side_length;
    Box box{std::vector<double>(center.size()), std::vector<double>(center.size())};
    for (std::size_t j = 0; j < center.size(); ++j) {
        box.lower[j] = std::clamp(center[j] - half, 0.0, 1.0);
        box.upper[j] = std::clamp(center[j] + half, 0.0, 1.0);
    }
    return box;
}

inline Design sample_in_box(const Box& box, RngStream& rng) {
    std::vector<double> x(box.lower.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = rng.uniform(box.lower[j], box.upper[j]);
    }
    return Design(std::move(x));
}

/// i.i.d. uniform draws inside the trust-region box.
inline std::vector<Design> sample_candidates(const TrustRegionState& st, std::size_t n, RngStream& rng) {
    if (n == 0) {
        throw std::invalid_argument("sample_candidates: n must be positive");
    }
    const Box box = tr_bounds(st);
    std::vector<Design> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sample_in_box(box, rng));
    }
    return out;
}

inline TrustRegionState tr_update(TrustRegionState st, const Observation& batch_best) {
    if (batch_best.value > st.incumbent_value) {
        ++st.success_count;
        st.failure_count = 0;
        st.incumbent_value = batch_best.value;
        st.incumbent_design = batch_best.design;
    } else {
        ++st.failure_count;
        st.success_count = 0;
    }
    if (st.success_count >= kSuccessTolerance) {
        st.side_length = std::min(2.0 * st.side_length, kSideMax);
        st.success_count = 0;
    }
    if (st.failure_count >= st.failure_tolerance) {
        st.side_length = 0.5 * st.side_length;
        st.failure_count = 0;
    }
    return st;
}

/// The state is still valid when this fires: the side length sits one
/// halving below kSideMin and the owner is expected to restart.
inline bool tr_should_restart(const TrustRegionState& st) { return st.side_length < kSideMin; }

} // namespace ennbo

#endif
