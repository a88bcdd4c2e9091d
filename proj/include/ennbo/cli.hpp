#ifndef ENNBO_CLI_HPP
#define ENNBO_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ennbo/benchmarks.hpp"
#include "ennbo/csv.hpp"
#include "ennbo/harness.hpp"
#include "ennbo/optimizer.hpp"
#include "ennbo/svg.hpp"

namespace ennbo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

inline constexpr const char* kOutputDirEnv = "ENNBO_OUTPUT_DIR";

struct RunConfig {
    std::string function = "ackley";
    std::size_t dimension = 30;
    std::vector<std::string> methods{"turbo-enn-10"};
    std::size_t rounds = 30;
    std::size_t arms_per_round = 1;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::string distortion_mode = "corrected";
    std::string aggregation = "mean";
    std::size_t init_count = 0;
    std::size_t threads = 0; // 0: hardware concurrency
    bool record_timing = true;
};

/// Invalid configuration; `field` names the offending RunConfig field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::invalid_argument(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ExperimentConfig to_experiment(const RunConfig& rc) {
    ExperimentConfig cfg;
    try {
        find_function(rc.function);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("function", e.what());
    }
    cfg.function = rc.function;
    if (rc.dimension == 0) {
        throw ConfigError("dimension", "must be at least 1");
    }
    cfg.dimension = rc.dimension;
    if (rc.methods.empty()) {
        throw ConfigError("methods", "at least one method is required");
    }
    for (const auto& m : rc.methods) {
        MethodSpec spec;
        try {
            spec = parse_method(m);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("methods", e.what());
        }
        for (const auto& seen : cfg.methods) {
            if (method_name(seen) == method_name(spec)) {
                throw ConfigError("methods", "method \"" + m + "\" listed twice");
            }
        }
        cfg.methods.push_back(spec);
    }
    if (rc.rounds == 0) {
        throw ConfigError("rounds", "must be at least 1");
    }
    cfg.rounds = rc.rounds;
    if (rc.arms_per_round == 0) {
        throw ConfigError("arms_per_round", "must be at least 1");
    }
    if (rc.arms_per_round > candidate_count(rc.dimension)) {
        throw ConfigError("arms_per_round", "exceeds the candidate pool size " +
                                                std::to_string(candidate_count(rc.dimension)));
    }
    cfg.arms_per_round = rc.arms_per_round;
    if (rc.replications == 0) {
        throw ConfigError("replications", "must be at least 1");
    }
    cfg.replications = rc.replications;
    cfg.seed = rc.seed;
    if (rc.output_dir.empty()) {
        throw ConfigError("output_dir", "must not be empty");
    }
    try {
        cfg.distortion_mode = parse_distortion_mode(rc.distortion_mode);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("distortion_mode", e.what());
    }
    try {
        parse_aggregation(rc.aggregation);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("aggregation", e.what());
    }
    if (rc.init_count == 1) {
        throw ConfigError("init_count", "must be 0 (default 2D) or at least 2");
    }
    cfg.init_count = rc.init_count;
    cfg.threads = rc.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : rc.threads;
    return cfg;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f << contents;
    f.close();
    if (!f) {
        throw IoError("failed writing " + path.string());
    }
}

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

inline std::string seconds_label(double ns) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g s", ns * 1e-9);
    return buf;
}

/// Max-so-far curves (mean +- standard error) and proposal time vs N.
inline void write_plots(const std::filesystem::path& dir, const std::vector<RunTrace>& traces,
                        const std::string& title) {
    const auto timing = timing_summary(traces);
    std::vector<svg::Series> ymax;
    std::vector<svg::Series> times;
    const auto methods = method_order(traces);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto band = ymax_band(traces_of(traces, methods[m]));
        svg::Series s;
        s.label = methods[m] + " (" + seconds_label(timing[m].cumulative_ns) + ")";
        for (std::size_t i = 0; i < band.mean.size(); ++i) {
            s.xs.push_back(static_cast<double>(i + 1));
            s.ys.push_back(band.mean[i]);
            s.band_lo.push_back(band.mean[i] - band.std_error[i]);
            s.band_hi.push_back(band.mean[i] + band.std_error[i]);
        }
        ymax.push_back(std::move(s));

        svg::Series t;
        t.label = methods[m];
        t.xs = timing[m].n_values;
        for (double ns : timing[m].mean_ns_at_n) {
            t.ys.push_back(ns * 1e-9);
        }
        times.push_back(std::move(t));
    }
    write_file(dir / "ymax.svg", svg::line_plot(ymax, {title, "round", "max-so-far y", false, false}));
    write_file(dir / "proposal_time.svg",
               svg::line_plot(times, {title, "observations N", "mean proposal time (s)", true, true}));
}

inline std::vector<std::optional<double>> scores_or_blank(const std::vector<RunTrace>& traces, Aggregation agg,
                                                          std::ostream& log) {
    const auto methods = method_order(traces);
    if (methods.size() < 2) {
        log << "note: rank scores need at least two methods; scores.csv left blank\n";
        return std::vector<std::optional<double>>(methods.size());
    }
    const auto table = rank_scores(traces, agg);
    return {table.scores.begin(), table.scores.end()};
}

inline std::filesystem::path write_run_outputs(const RunConfig& rc, const std::vector<RunTrace>& traces,
                                               std::ostream& log) {
    const std::filesystem::path dir(rc.output_dir);
    ensure_dir(dir);
    std::ostringstream tr;
    write_traces(tr, traces, rc.record_timing);
    write_file(dir / "traces.csv", tr.str());

    std::ostringstream sc;
    write_scores(sc, method_order(traces), scores_or_blank(traces, parse_aggregation(rc.aggregation), log));
    write_file(dir / "scores.csv", sc.str());

    std::ostringstream tm;
    write_timing(tm, timing_summary(traces));
    write_file(dir / "timing.csv", tm.str());

    write_plots(dir, traces, rc.function + " D=" + std::to_string(rc.dimension));
    return dir;
}

inline int cmd_run(const RunConfig& rc, std::ostream& log = std::cerr) {
    try {
        const auto cfg = to_experiment(rc);
        const auto traces = run_experiment(cfg);
        const auto dir = write_run_outputs(rc, traces, log);
        log << "wrote traces.csv, scores.csv, timing.csv, ymax.svg, proposal_time.svg to " << dir.string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

/// turbo-enn for each K; the score-vs-K table goes to score_vs_k.csv/.svg.
inline int cmd_sweep_k(RunConfig rc, std::vector<std::size_t> ks, std::ostream& log = std::cerr) {
    try {
        std::vector<std::size_t> unique;
        for (auto k : ks) {
            if (k == 0) {
                throw ConfigError("k", "K must be at least 1");
            }
            if (std::find(unique.begin(), unique.end(), k) != unique.end()) {
                log << "warning: duplicate K=" << k << " ignored\n";
                continue;
            }
            unique.push_back(k);
        }
        if (unique.size() < 2) {
            throw ConfigError("k", "need at least two distinct K values");
        }
        rc.methods.clear();
        for (auto k : unique) {
            rc.methods.push_back("turbo-enn-" + std::to_string(k));
        }
        const auto cfg = to_experiment(rc);
        const auto traces = run_experiment(cfg);
        const auto dir = write_run_outputs(rc, traces, log);

        const auto table = rank_scores(traces, parse_aggregation(rc.aggregation));
        std::ostringstream out;
        out << "k,method,score\n";
        svg::Series s;
        s.label = "turbo-enn-K";
        for (std::size_t i = 0; i < unique.size(); ++i) {
            out << unique[i] << ',' << table.methods[i] << ',' << format_double(table.scores[i]) << '\n';
            s.xs.push_back(static_cast<double>(unique[i]));
            s.ys.push_back(table.scores[i]);
        }
        write_file(dir / "score_vs_k.csv", out.str());
        write_file(dir / "score_vs_k.svg", svg::line_plot({s}, {"score vs K", "K", "score", true, false}));
        log << "wrote sweep outputs to " << dir.string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

inline int cmd_plot(const std::string& traces_path, const std::string& output_dir, std::ostream& log = std::cerr) {
    std::ifstream in(traces_path, std::ios::binary);
    if (!in) {
        log << "error: cannot open " << traces_path << '\n';
        return kExitIo;
    }
    std::vector<RunTrace> traces;
    try {
        traces = read_traces(in);
        method_order(traces);
        for (const auto& m : method_order(traces)) {
            ymax_band(traces_of(traces, m));
        }
    } catch (const CsvError& e) {
        log << "error: " << traces_path << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        log << "error: " << traces_path << ": " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const std::filesystem::path dir(output_dir);
        ensure_dir(dir);
        const auto& t = traces.front();
        write_plots(dir, traces, t.function + " D=" + std::to_string(t.dimension));
        log << "wrote ymax.svg, proposal_time.svg to " << dir.string() << '\n';
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

/// Fills options of `app` not already set on the command line or from the
/// environment with values from a TOML file.
inline void apply_config_file(CLI::App& app, const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw IoError("cannot open config file " + path);
    }
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw ConfigError("config", path + ": " + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") {
            continue;
        }
        CLI::Option* opt = app.get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config" || !item.parents.empty()) {
            throw ConfigError(item.fullname(), "unknown key in " + path);
        }
        if (opt->count() > 0) {
            continue;
        }
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ConfigError(item.name, e.what());
        }
    }
}

inline void add_run_options(CLI::App& app, RunConfig& rc, std::string& config_path) {
    app.add_option("--config", config_path, "TOML file of option values; flags and environment take precedence");
    app.add_option("--function", rc.function, "Test function (" + function_names() + ")");
    app.add_option("--dimension,-D", rc.dimension, "Problem dimension D")->check(CLI::PositiveNumber);
    app.add_option("--methods", rc.methods, "Methods: " + std::string(kSupportedMethods))->delimiter(',');
    app.add_option("--rounds", rc.rounds, "Rounds per run");
    app.add_option("--arms_per_round,--arms-per-round", rc.arms_per_round, "Arms proposed per round");
    app.add_option("--replications", rc.replications, "Replications per method");
    app.add_option("--seed", rc.seed, "Base seed");
    app.add_option("--output_dir,--output-dir", rc.output_dir, "Output directory")->envname(kOutputDirEnv);
    app.add_option("--distortion_mode,--distortion-mode", rc.distortion_mode, "corrected | paper-literal");
    app.add_option("--aggregation", rc.aggregation, "Replication aggregation before ranking: mean | rank");
    app.add_option("--init_count,--init-count", rc.init_count, "Initial Latin-hypercube designs (0 = 2D)");
    app.add_option("--threads", rc.threads, "Worker threads for replications (0 = all cores)");
    app.add_option("--record_timing,--record-timing", rc.record_timing,
                   "Write measured proposal times to traces.csv (false writes 0)");
}

/// Entry point shared by the ennbo executable and the tests.
inline int main_cli(int argc, const char* const* argv, std::ostream& log = std::cerr) {
    CLI::App app{"Trust-region Bayesian optimization with an epistemic nearest-neighbor surrogate"};
    app.require_subcommand(1);

    RunConfig run_cfg;
    std::string run_config;
    auto* run = app.add_subcommand("run", "Run an experiment and write traces, scores, timing and plots");
    add_run_options(*run, run_cfg, run_config);

    RunConfig sweep_cfg;
    std::string sweep_config;
    std::vector<std::size_t> ks;
    auto* sweep = app.add_subcommand("sweep-k", "Run turbo-enn for several K and compare scores");
    add_run_options(*sweep, sweep_cfg, sweep_config);
    sweep->add_option("--k,-k", ks, "Neighbor counts to sweep")->delimiter(',')->required();

    std::string traces_path;
    std::string plot_dir = "out";
    auto* plot = app.add_subcommand("plot", "Render SVG plots from a traces.csv file");
    plot->add_option("traces", traces_path, "Path to traces.csv")->required();
    plot->add_option("--output_dir,--output-dir", plot_dir, "Output directory")->envname(kOutputDirEnv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, std::cout, log);
    } catch (const CLI::ParseError& e) {
        log << "error: " << e.what() << '\n';
        log << "run with --help for usage\n";
        return kExitConfig;
    }

    try {
        if (run->parsed() && !run_config.empty()) {
            apply_config_file(*run, run_config);
        }
        if (sweep->parsed() && !sweep_config.empty()) {
            apply_config_file(*sweep, sweep_config);
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        return kExitIo;
    }

    if (run->parsed()) {
        return cmd_run(run_cfg, log);
    }
    if (sweep->parsed()) {
        return cmd_sweep_k(sweep_cfg, ks, log);
    }
    return cmd_plot(traces_path, plot_dir, log);
}

} // namespace ennbo::cli

#endif
