#ifndef ENNBO_HARNESS_HPP
#define ENNBO_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ennbo/benchmarks.hpp"
#include "ennbo/core.hpp"
#include "ennbo/optimizer.hpp"

namespace ennbo {

struct RoundRecord {
    std::size_t round = 0; // 1-based
    std::vector<Design> arms;
    std::vector<double> values;
    double y_max = 0.0;
    std::int64_t proposal_ns = 0;
    std::size_t n_observations = 0; // dataset size the proposal was computed from
    bool init = false;              // proposal came from the initialization design
};

/// One optimization run of one method on one distorted function.
class RunTrace {
public:
    std::string method;
    std::string function;
    std::size_t dimension = 0;
    std::size_t replication = 0;
    std::uint64_t distortion_seed = 0;
    std::vector<double> x0;

    const std::vector<RoundRecord>& rounds() const { return rounds_; }
    std::size_t round_count() const { return rounds_.size(); }

    double y_max() const {
        return rounds_.empty() ? -std::numeric_limits<double>::infinity() : rounds_.back().y_max;
    }

    /// Appends a round; y_max is derived here so it can only be non-decreasing.
    void add_round(std::vector<Design> arms, std::vector<double> values, std::int64_t proposal_ns,
                   std::size_t n_observations, bool init = false) {
        if (proposal_ns < 0) {
            throw std::invalid_argument("RunTrace: proposal time must be nonnegative");
        }
        if (values.empty() || arms.size() != values.size()) {
            throw std::invalid_argument("RunTrace: a round needs matching nonempty arms and values");
        }
        RoundRecord r;
        r.round = rounds_.size() + 1;
        r.y_max = y_max();
        for (double v : values) {
            r.y_max = std::max(r.y_max, v);
        }
        r.arms = std::move(arms);
        r.values = std::move(values);
        r.proposal_ns = proposal_ns;
        r.n_observations = n_observations;
        r.init = init;
        rounds_.push_back(std::move(r));
    }

    /// For traces rebuilt from files, where only the values are known.
    void add_round_values(std::vector<double> values, std::int64_t proposal_ns, std::size_t n_observations) {
        std::vector<Design> arms(values.size());
        add_round(std::move(arms), std::move(values), proposal_ns, n_observations);
    }

private:
    std::vector<RoundRecord> rounds_;
};

struct ExperimentConfig {
    std::vector<MethodSpec> methods;
    std::string function = "ackley";
    std::size_t dimension = 30;
    std::size_t rounds = 30;
    std::size_t arms_per_round = 1;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::size_t init_count = 0; // 0: 2D
    DistortionMode distortion_mode = DistortionMode::corrected;
    std::size_t threads = 1;
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the distortion for replication `rep`; shared by every method.
inline std::uint64_t distortion_seed(std::uint64_t base_seed, std::size_t rep) {
    return RngStream::mix(RngStream::mix(base_seed) ^ RngStream::mix(0xd15703710000ULL + rep));
}

/// Optimizer stream for (base seed, method, replication).
inline RngStream method_stream(std::uint64_t base_seed, std::string_view method, std::size_t rep) {
    return RngStream(base_seed, RngStream::mix(fnv1a(method)) ^ RngStream::mix(rep));
}

inline RunTrace run_single(const MethodSpec& spec, const TestFunction& f, const Distortion& dist, std::size_t rounds,
                           RngStream rng) {
    Optimizer opt(dist.dimension(), spec, rng);
    RunTrace trace;
    trace.method = method_name(spec);
    trace.function = f.name;
    trace.dimension = dist.dimension();
    trace.x0.assign(dist.x0().begin(), dist.x0().end());
    for (std::size_t r = 0; r < rounds; ++r) {
        auto arms = opt.ask();
        std::vector<double> values(arms.size());
        for (std::size_t i = 0; i < arms.size(); ++i) {
            values[i] = evaluate(f, dist, arms[i]);
        }
        opt.tell(arms, values);
        trace.add_round(std::move(arms), std::move(values), opt.last_proposal_ns(), opt.last_proposal_n(),
                        opt.last_proposal_was_init());
    }
    return trace;
}

/// Runs every (method, replication) pair. Traces come back ordered method-major,
/// replication-minor regardless of how the work was scheduled.
inline std::vector<RunTrace> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.rounds == 0 || cfg.replications == 0) {
        throw std::invalid_argument("run_experiment: rounds and replications must be at least 1");
    }
    if (cfg.methods.empty()) {
        throw std::invalid_argument("run_experiment: at least one method is required");
    }
    if (cfg.dimension == 0) {
        throw std::invalid_argument("run_experiment: dimension must be at least 1");
    }
    const TestFunction& f = find_function(cfg.function);

    std::vector<Distortion> dists;
    std::vector<std::uint64_t> dseeds;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        dseeds.push_back(distortion_seed(cfg.seed, rep));
        RngStream drng(dseeds.back(), 0);
        dists.push_back(Distortion::random(cfg.dimension, drng, cfg.distortion_mode));
    }

    std::vector<MethodSpec> specs = cfg.methods;
    for (auto& s : specs) {
        s.arms_per_round = cfg.arms_per_round;
        s.init_count = cfg.init_count;
    }

    const std::size_t jobs = specs.size() * cfg.replications;
    std::vector<RunTrace> traces(jobs);
    auto run_job = [&](std::size_t job) {
        const std::size_t m = job / cfg.replications;
        const std::size_t rep = job % cfg.replications;
        const std::string name = method_name(specs[m]);
        RunTrace t = run_single(specs[m], f, dists[rep], cfg.rounds, method_stream(cfg.seed, name, rep));
        t.replication = rep;
        t.distortion_seed = dseeds[rep];
        traces[job] = std::move(t);
    };

    const std::size_t workers = std::min(std::max<std::size_t>(1, cfg.threads), jobs);
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) {
            run_job(j);
        }
        return traces;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t j = next++; j < jobs; j = next++) {
                try {
                    run_job(j);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return traces;
}

/// Methods in first-appearance order.
inline std::vector<std::string> method_order(const std::vector<RunTrace>& traces) {
    std::vector<std::string> out;
    for (const auto& t : traces) {
        if (std::find(out.begin(), out.end(), t.method) == out.end()) {
            out.push_back(t.method);
        }
    }
    return out;
}

inline std::vector<const RunTrace*> traces_of(const std::vector<RunTrace>& traces, std::string_view method) {
    std::vector<const RunTrace*> out;
    for (const auto& t : traces) {
        if (t.method == method) {
            out.push_back(&t);
        }
    }
    return out;
}

struct Band {
    std::vector<double> mean;
    std::vector<double> std_error; // sample std / sqrt(reps); zero for a single replication
};

/// Per-round mean and standard error of y_max across replications.
inline Band ymax_band(const std::vector<const RunTrace*>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("ymax_band: no runs");
    }
    const std::size_t rounds = runs.front()->round_count();
    for (const auto* r : runs) {
        if (r->round_count() != rounds) {
            throw std::invalid_argument("ymax_band: runs have different round counts");
        }
    }
    const double n = static_cast<double>(runs.size());
    Band b{std::vector<double>(rounds, 0.0), std::vector<double>(rounds, 0.0)};
    for (std::size_t i = 0; i < rounds; ++i) {
        double sum = 0.0;
        for (const auto* r : runs) {
            sum += r->rounds()[i].y_max;
        }
        const double mean = sum / n;
        b.mean[i] = mean;
        if (runs.size() > 1) {
            double ss = 0.0;
            for (const auto* r : runs) {
                double d = r->rounds()[i].y_max - mean;
                ss += d * d;
            }
            b.std_error[i] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
    }
    return b;
}

/// Fractional (average) ranks, 1 = smallest.
inline std::vector<double> fractional_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i + 1;
        while (j < idx.size() && v[idx[j]] == v[idx[i]]) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[idx[k]] = avg;
        }
        i = j;
    }
    return ranks;
}

struct ScoreTable {
    std::vector<std::string> methods;
    std::vector<double> scores;
    std::size_t rounds = 0;

    double score(std::string_view method) const {
        for (std::size_t i = 0; i < methods.size(); ++i) {
            if (methods[i] == method) {
                return scores[i];
            }
        }
        throw std::out_of_range("ScoreTable: no method " + std::string(method));
    }
};

/// Normalized rank score: each round, methods are ranked by their y_max curve
/// value (rank 1 = worst), mapped to (rank - 1) / (M - 1), and averaged over
/// rounds. `curves[m][n]` is method m's value at round n.
inline std::vector<double> rank_scores(const std::vector<std::vector<double>>& curves) {
    const std::size_t m = curves.size();
    if (m < 2) {
        throw std::invalid_argument("rank_scores: need at least two methods");
    }
    const std::size_t rounds = curves.front().size();
    if (rounds == 0) {
        throw std::invalid_argument("rank_scores: need at least one round");
    }
    for (const auto& c : curves) {
        if (c.size() != rounds) {
            throw std::invalid_argument("rank_scores: methods have mismatched round counts");
        }
    }
    std::vector<double> scores(m, 0.0);
    std::vector<double> column(m);
    for (std::size_t n = 0; n < rounds; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            column[i] = curves[i][n];
        }
        auto ranks = fractional_ranks(column);
        for (std::size_t i = 0; i < m; ++i) {
            scores[i] += (ranks[i] - 1.0) / static_cast<double>(m - 1);
        }
    }
    for (auto& s : scores) {
        s /= static_cast<double>(rounds);
    }
    return scores;
}

enum class Aggregation {
    mean_then_rank, // rank the replication-mean y_max curves
    rank_then_mean, // rank within each replication, then average the scores
};

inline Aggregation parse_aggregation(std::string_view s) {
    if (s == "mean") {
        return Aggregation::mean_then_rank;
    }
    if (s == "rank") {
        return Aggregation::rank_then_mean;
    }
    throw std::invalid_argument("aggregation must be \"mean\" or \"rank\", got \"" + std::string(s) + "\"");
}

inline ScoreTable rank_scores(const std::vector<RunTrace>& traces, Aggregation agg = Aggregation::mean_then_rank) {
    ScoreTable table;
    table.methods = method_order(traces);
    const std::size_t m = table.methods.size();
    std::vector<std::vector<const RunTrace*>> groups;
    for (const auto& name : table.methods) {
        groups.push_back(traces_of(traces, name));
    }

    if (agg == Aggregation::mean_then_rank) {
        std::vector<std::vector<double>> curves;
        for (const auto& g : groups) {
            curves.push_back(ymax_band(g).mean);
        }
        table.scores = rank_scores(curves);
        table.rounds = curves.front().size();
        return table;
    }

    const std::size_t reps = groups.front().size();
    for (const auto& g : groups) {
        if (g.size() != reps) {
            throw std::invalid_argument("rank_scores: methods have different replication counts");
        }
    }
    table.scores.assign(m, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        std::vector<std::vector<double>> curves(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (const auto& rec : groups[i][r]->rounds()) {
                curves[i].push_back(rec.y_max);
            }
        }
        auto s = rank_scores(curves);
        for (std::size_t i = 0; i < m; ++i) {
            table.scores[i] += s[i] / static_cast<double>(reps);
        }
        table.rounds = curves.front().size();
    }
    return table;
}

/// Least-squares slope of log(y) against log(x). Points with a nonpositive
/// coordinate are skipped; nullopt when fewer than two distinct x remain.
inline std::optional<double> loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (xs[i] > 0.0 && ys[i] > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) {
        return std::nullopt;
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) {
        return std::nullopt;
    }
    return sxy / sxx;
}

struct MethodTiming {
    std::string method;
    std::vector<double> mean_ns_per_round; // averaged over replications
    double cumulative_ns = 0.0;            // sum of mean_ns_per_round
    std::vector<double> n_values;          // distinct N past initialization, ascending
    std::vector<double> mean_ns_at_n;      // mean proposal time at each N
    std::optional<double> slope;           // d log(time) / d log(N)
};

/// Per-method proposal-time summary. The slope is fitted on rounds past
/// initialization, after averaging the times observed at each dataset size N.
inline std::vector<MethodTiming> timing_summary(const std::vector<RunTrace>& traces) {
    std::vector<MethodTiming> out;
    for (const auto& name : method_order(traces)) {
        auto runs = traces_of(traces, name);
        MethodTiming mt;
        mt.method = name;
        std::size_t rounds = 0;
        for (const auto* r : runs) {
            rounds = std::max(rounds, r->round_count());
        }
        std::vector<double> sum(rounds, 0.0);
        std::vector<double> count(rounds, 0.0);
        std::map<std::size_t, std::pair<double, double>> by_n;
        bool any_positive = false;
        for (const auto* r : runs) {
            for (const auto& rec : r->rounds()) {
                sum[rec.round - 1] += static_cast<double>(rec.proposal_ns);
                count[rec.round - 1] += 1.0;
                if (!rec.init) {
                    auto& acc = by_n[rec.n_observations];
                    acc.first += static_cast<double>(rec.proposal_ns);
                    acc.second += 1.0;
                }
                any_positive = any_positive || rec.proposal_ns > 0;
            }
        }
        for (std::size_t i = 0; i < rounds; ++i) {
            double mean = count[i] > 0.0 ? sum[i] / count[i] : 0.0;
            mt.mean_ns_per_round.push_back(mean);
            mt.cumulative_ns += mean;
        }
        for (const auto& [n, acc] : by_n) {
            mt.n_values.push_back(static_cast<double>(n));
            mt.mean_ns_at_n.push_back(acc.first / acc.second);
        }
        if (any_positive) {
            mt.slope = loglog_slope(mt.n_values, mt.mean_ns_at_n);
        }
        out.push_back(std::move(mt));
    }
    return out;
}

} // namespace ennbo

#endif
