#ifndef ENNBO_OPTIMIZER_HPP
#define ENNBO_OPTIMIZER_HPP

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ennbo/core.hpp"
#include "ennbo/enn.hpp"
#include "ennbo/pareto.hpp"
#include "ennbo/trust_region.hpp"

namespace ennbo {

enum class MethodKind { random, turbo0, turbo_enn, turbo_enn_mu, turbo_enn_sigma, turbo_enn_rand };

struct MethodSpec {
    MethodKind kind = MethodKind::turbo_enn;
    std::size_t k = kDefaultNeighbors;
    std::size_t arms_per_round = 1;
    std::size_t init_count = 0; // 0 selects the default of 2D

    bool uses_trust_region() const { return kind != MethodKind::random; }
    bool uses_surrogate() const { return kind != MethodKind::random && kind != MethodKind::turbo0; }
};

inline constexpr std::string_view kSupportedMethods =
    "random, turbo-0, turbo-enn-<K>, turbo-enn-mu-<K>, turbo-enn-sigma-<K>, turbo-enn-rand-<K>";

class UnknownMethodError : public std::invalid_argument {
public:
    explicit UnknownMethodError(const std::string& name)
        : std::invalid_argument("unknown method \"" + name + "\"; supported methods: " +
                                std::string(kSupportedMethods)) {}
};

/// Parses a method label such as "turbo-enn-10" or "random". The trailing
/// integer of the ENN labels is the neighbor count K.
inline MethodSpec parse_method(std::string_view name) {
    MethodSpec spec;
    if (name == "random") {
        spec.kind = MethodKind::random;
        return spec;
    }
    if (name == "turbo-0") {
        spec.kind = MethodKind::turbo0;
        return spec;
    }
    struct Prefix {
        std::string_view text;
        MethodKind kind;
    };
    // Longest prefixes first so "turbo-enn-" does not swallow the ablations.
    static constexpr Prefix prefixes[] = {
        {"turbo-enn-sigma-", MethodKind::turbo_enn_sigma},
        {"turbo-enn-rand-", MethodKind::turbo_enn_rand},
        {"turbo-enn-mu-", MethodKind::turbo_enn_mu},
        {"turbo-enn-", MethodKind::turbo_enn},
    };
    for (const auto& p : prefixes) {
        if (name.substr(0, p.text.size()) != p.text) {
            continue;
        }
        auto digits = name.substr(p.text.size());
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || k == 0) {
            break;
        }
        spec.kind = p.kind;
        spec.k = k;
        return spec;
    }
    throw UnknownMethodError(std::string(name));
}

inline std::string method_name(const MethodSpec& spec) {
    switch (spec.kind) {
    case MethodKind::random:
        return "random";
    case MethodKind::turbo0:
        return "turbo-0";
    case MethodKind::turbo_enn:
        return "turbo-enn-" + std::to_string(spec.k);
    case MethodKind::turbo_enn_mu:
        return "turbo-enn-mu-" + std::to_string(spec.k);
    case MethodKind::turbo_enn_sigma:
        return "turbo-enn-sigma-" + std::to_string(spec.k);
    case MethodKind::turbo_enn_rand:
        return "turbo-enn-rand-" + std::to_string(spec.k);
    }
    return "?";
}

/// Stratified design: in every dimension the n points occupy the n strata
/// [i/n, (i+1)/n) once each, jittered uniformly inside their stratum.
inline std::vector<Design> latin_hypercube(std::size_t dimension, std::size_t n, RngStream& rng) {
    if (n == 0 || dimension == 0) {
        throw std::invalid_argument("latin_hypercube: dimension and n must be positive");
    }
    std::vector<std::vector<double>> pts(n, std::vector<double>(dimension));
    std::vector<std::size_t> strata(n);
    const double width = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < dimension; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            strata[i] = i;
        }
        rng.shuffle(strata);
        for (std::size_t i = 0; i < n; ++i) {
            double lo = static_cast<double>(strata[i]) * width;
            double hi = std::nextafter(static_cast<double>(strata[i] + 1) * width, 0.0);
            pts[i][j] = std::min(lo + rng.uniform() * width, hi);
        }
    }
    std::vector<Design> out;
    out.reserve(n);
    for (auto& p : pts) {
        out.emplace_back(std::move(p));
    }
    return out;
}

inline std::size_t candidate_count(std::size_t dimension) { return std::max<std::size_t>(5000, 2 * dimension); }

/// Ask/tell loop for one method on one problem. ask() proposes a batch of
/// arms_per_round designs; tell() feeds back their values.
class Optimizer {
public:
    Optimizer(std::size_t dimension, MethodSpec spec, RngStream rng)
        : spec_(spec), dataset_(dimension), rng_(rng) {
        if (spec_.k == 0) {
            throw std::invalid_argument("MethodSpec: K must be at least 1");
        }
        if (spec_.arms_per_round == 0) {
            throw std::invalid_argument("MethodSpec: arms_per_round must be at least 1");
        }
        if (spec_.init_count == 0) {
            spec_.init_count = std::max<std::size_t>(2, 2 * dimension);
        }
        if (spec_.init_count < 2) {
            throw std::invalid_argument("MethodSpec: init_count must be at least 2");
        }
        if (spec_.uses_trust_region()) {
            start_epoch();
        }
    }

    const MethodSpec& spec() const { return spec_; }
    std::size_t dimension() const { return dataset_.dimension(); }
    const Dataset& dataset() const { return dataset_; }
    const std::optional<TrustRegionState>& trust_region() const { return tr_; }
    std::size_t pending_init() const { return init_queue_.size(); }
    std::size_t restarts() const { return restarts_; }
    std::size_t rounds() const { return rounds_; }

    /// Wall-clock nanoseconds spent inside the most recent ask().
    std::int64_t last_proposal_ns() const { return last_proposal_ns_; }
    /// Dataset size seen by the most recent ask().
    std::size_t last_proposal_n() const { return last_proposal_n_; }
    /// Whether the most recent ask() came from the initialization design.
    bool last_proposal_was_init() const { return last_was_init_; }
    /// Candidate pool scored by the most recent surrogate-driven ask(), with
    /// the sigmas actually used for selection. Empty otherwise.
    const CandidatePool& last_pool() const { return pool_; }
    /// Pool indices chosen by the most recent surrogate-driven ask().
    const std::vector<std::size_t>& last_picks() const { return picks_; }

    std::vector<Design> ask() {
        const auto t0 = std::chrono::steady_clock::now();
        last_proposal_n_ = dataset_.size();
        last_was_init_ = false;
        pool_ = CandidatePool{};
        picks_.clear();
        std::vector<Design> arms = propose();
        const auto t1 = std::chrono::steady_clock::now();
        last_proposal_ns_ = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        ++rounds_;
        return arms;
    }

    void tell(const std::vector<Design>& arms, const std::vector<double>& values) {
        if (arms.size() != values.size()) {
            throw std::invalid_argument("tell: " + std::to_string(arms.size()) + " arms but " +
                                        std::to_string(values.size()) + " values");
        }
        if (arms.empty()) {
            throw std::invalid_argument("tell: empty batch");
        }
        for (std::size_t i = 0; i < arms.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw std::invalid_argument("tell: value " + std::to_string(i) + " is not finite");
            }
            if (arms[i].dimension() != dataset_.dimension()) {
                throw std::invalid_argument("tell: arm " + std::to_string(i) + " has the wrong dimension");
            }
        }
        for (std::size_t i = 0; i < arms.size(); ++i) {
            dataset_.append({arms[i], values[i]});
        }
        if (!spec_.uses_trust_region()) {
            return;
        }

        if (!tr_) {
            init_outstanding_ -= std::min(init_outstanding_, arms.size());
            if (init_outstanding_ == 0 && init_queue_.empty()) {
                tr_ = tr_init(dataset_.dimension(), dataset_.observation(dataset_.best_index()),
                              spec_.arms_per_round);
            }
            return;
        }

        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] > values[best]) {
                best = i;
            }
        }
        tr_ = tr_update(*tr_, Observation{arms[best], values[best]});
        if (tr_should_restart(*tr_)) {
            ++restarts_;
            dataset_.clear();
            start_epoch();
        }
    }

private:
    void start_epoch() {
        tr_.reset();
        // Whole rounds of initialization only.
        const std::size_t a = spec_.arms_per_round;
        const std::size_t n = (spec_.init_count + a - 1) / a * a;
        auto lhs = latin_hypercube(dataset_.dimension(), n, rng_);
        init_queue_.assign(lhs.begin(), lhs.end());
        init_outstanding_ = 0;
    }

    std::vector<Design> propose() {
        const std::size_t arms = spec_.arms_per_round;
        const std::size_t dim = dataset_.dimension();
        if (spec_.kind == MethodKind::random) {
            std::vector<Design> out;
            out.reserve(arms);
            for (std::size_t i = 0; i < arms; ++i) {
                out.push_back(uniform_design(dim, rng_));
            }
            return out;
        }

        if (!init_queue_.empty()) {
            last_was_init_ = true;
            std::vector<Design> out(init_queue_.begin(), init_queue_.begin() + static_cast<std::ptrdiff_t>(arms));
            init_queue_.erase(init_queue_.begin(), init_queue_.begin() + static_cast<std::ptrdiff_t>(arms));
            init_outstanding_ += arms;
            return out;
        }
        if (!tr_) {
            throw std::logic_error("ask: initialization designs are still awaiting tell(); no data to propose from");
        }

        if (spec_.kind == MethodKind::turbo0) {
            const Box box = tr_bounds(*tr_);
            std::vector<Design> out;
            out.reserve(arms);
            for (std::size_t i = 0; i < arms; ++i) {
                out.push_back(sample_in_box(box, rng_));
            }
            return out;
        }

        if (dataset_.empty()) {
            throw std::logic_error("ask: dataset is empty; cannot query the surrogate");
        }

        CandidatePool& pool = pool_;
        pool.designs = sample_candidates(*tr_, candidate_count(dim), rng_);
        pool.mus.resize(pool.designs.size());
        pool.sigmas.resize(pool.designs.size());
        for (std::size_t i = 0; i < pool.designs.size(); ++i) {
            Estimate e = query(dataset_, pool.designs[i], spec_.k);
            pool.mus[i] = e.mu;
            pool.sigmas[i] = std::sqrt(e.sigma2);
        }

        std::vector<std::size_t>& picks = picks_;
        switch (spec_.kind) {
        case MethodKind::turbo_enn:
            picks = select_arm_indices(pool, arms, rng_);
            break;
        case MethodKind::turbo_enn_rand:
            for (auto& s : pool.sigmas) {
                s = rng_.uniform_open();
            }
            picks = select_arm_indices(pool, arms, rng_);
            break;
        case MethodKind::turbo_enn_mu:
            picks = top_indices(pool.mus, pool.sigmas, arms);
            break;
        case MethodKind::turbo_enn_sigma:
            picks = top_indices(pool.sigmas, pool.mus, arms);
            break;
        default:
            throw std::logic_error("unreachable method kind");
        }
        std::vector<Design> out;
        out.reserve(picks.size());
        for (auto i : picks) {
            out.push_back(pool.designs[i]);
        }
        return out;
    }

    MethodSpec spec_;
    Dataset dataset_;
    RngStream rng_;
    std::optional<TrustRegionState> tr_;
    std::deque<Design> init_queue_;
    std::size_t init_outstanding_ = 0;
    std::size_t restarts_ = 0;
    std::size_t rounds_ = 0;
    std::int64_t last_proposal_ns_ = 0;
    std::size_t last_proposal_n_ = 0;
    bool last_was_init_ = false;
    CandidatePool pool_;
    std::vector<std::size_t> picks_;
};

} // namespace ennbo

#endif
