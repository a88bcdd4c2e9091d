#ifndef ENNBO_CSV_HPP
#define ENNBO_CSV_HPP

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ennbo/harness.hpp"

namespace ennbo {

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: to_chars failed");
    }
    return std::string(buf, ptr);
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t row, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// RFC 4180 reader. Row numbers are 1-based and count the header.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    char c;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        field_started = false;
    };
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty()) {
                throw CsvError(rows.size() + 1, "quote inside an unquoted field");
            }
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\r') {
            continue;
        } else if (c == '\n') {
            end_row();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) {
        throw CsvError(rows.size() + 1, "unterminated quoted field");
    }
    if (field_started || !row.empty()) {
        end_row();
    }
    return rows;
}

inline constexpr std::string_view kTraceHeader =
    "run_id,method,function,dimension,replication,round,arm_index,y,y_max,proposal_time_ns,distortion_seed";

/// One row per evaluated arm. y_max is the running maximum through that arm;
/// proposal_time_ns is the round's proposal time, repeated on each arm row.
/// With record_timing off the time column is written as 0 so the file is a
/// pure function of (config, seed).
inline void write_traces(std::ostream& out, const std::vector<RunTrace>& traces, bool record_timing = true) {
    out << kTraceHeader << '\n';
    for (std::size_t run = 0; run < traces.size(); ++run) {
        const auto& t = traces[run];
        double running = -std::numeric_limits<double>::infinity();
        for (const auto& rec : t.rounds()) {
            for (std::size_t a = 0; a < rec.values.size(); ++a) {
                running = std::max(running, rec.values[a]);
                out << run << ',' << csv_field(t.method) << ',' << csv_field(t.function) << ',' << t.dimension << ','
                    << t.replication << ',' << rec.round << ',' << a << ',' << format_double(rec.values[a]) << ','
                    << format_double(running) << ',' << (record_timing ? rec.proposal_ns : 0) << ','
                    << t.distortion_seed << '\n';
            }
        }
    }
}

namespace detail {

template <typename T>
T parse_number(const std::string& s, std::size_t row, std::string_view column) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw CsvError(row, "column " + std::string(column) + ": cannot parse \"" + s + "\"");
    }
    return v;
}

} // namespace detail

/// Rebuilds traces from traces.csv. Designs are not stored in the file, so
/// arms come back empty; n_observations is the count of earlier arm rows.
inline std::vector<RunTrace> read_traces(std::istream& in) {
    auto rows = parse_csv(in);
    if (rows.empty()) {
        throw CsvError(1, "empty file (missing header)");
    }
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        header += (i ? "," : "") + rows[0][i];
    }
    if (header != kTraceHeader) {
        throw CsvError(1, "unexpected header; want " + std::string(kTraceHeader));
    }
    if (rows.size() < 2) {
        throw CsvError(2, "no data rows");
    }

    struct Pending {
        RunTrace trace;
        std::size_t round = 0;
        std::vector<double> values;
        std::int64_t ns = 0;
        std::size_t observations = 0;
    };
    std::map<std::size_t, Pending> runs;
    std::vector<std::size_t> order;

    auto flush = [](Pending& p) {
        if (p.values.empty()) {
            return;
        }
        const std::size_t n = p.values.size();
        p.trace.add_round_values(std::move(p.values), p.ns, p.observations);
        p.observations += n;
        p.values.clear();
    };

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::size_t rowno = r + 1;
        const auto& f = rows[r];
        if (f.size() != 11) {
            throw CsvError(rowno, "expected 11 fields, got " + std::to_string(f.size()));
        }
        auto run_id = detail::parse_number<std::size_t>(f[0], rowno, "run_id");
        auto dimension = detail::parse_number<std::size_t>(f[3], rowno, "dimension");
        auto replication = detail::parse_number<std::size_t>(f[4], rowno, "replication");
        auto round = detail::parse_number<std::size_t>(f[5], rowno, "round");
        auto arm = detail::parse_number<std::size_t>(f[6], rowno, "arm_index");
        auto y = detail::parse_number<double>(f[7], rowno, "y");
        detail::parse_number<double>(f[8], rowno, "y_max");
        auto ns = detail::parse_number<std::int64_t>(f[9], rowno, "proposal_time_ns");
        auto dseed = detail::parse_number<std::uint64_t>(f[10], rowno, "distortion_seed");
        if (ns < 0) {
            throw CsvError(rowno, "negative proposal_time_ns");
        }

        auto [it, inserted] = runs.try_emplace(run_id);
        Pending& p = it->second;
        if (inserted) {
            order.push_back(run_id);
            p.trace.method = f[1];
            p.trace.function = f[2];
            p.trace.dimension = dimension;
            p.trace.replication = replication;
            p.trace.distortion_seed = dseed;
        } else if (p.trace.method != f[1] || p.trace.replication != replication) {
            throw CsvError(rowno, "run_id " + f[0] + " changes method or replication");
        }
        if (round != p.round) {
            if (round != p.round + 1) {
                throw CsvError(rowno, "round " + f[5] + " out of sequence");
            }
            flush(p);
            p.round = round;
            p.ns = ns;
        }
        if (arm != p.values.size()) {
            throw CsvError(rowno, "arm_index " + f[6] + " out of sequence");
        }
        p.values.push_back(y);
    }
    std::vector<RunTrace> out;
    for (auto id : order) {
        flush(runs[id]);
        out.push_back(std::move(runs[id].trace));
    }
    return out;
}

inline void write_scores(std::ostream& out, const std::vector<std::string>& methods,
                         const std::vector<std::optional<double>>& scores) {
    out << "method,score\n";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        out << csv_field(methods[i]) << ',' << (scores[i] ? format_double(*scores[i]) : "") << '\n';
    }
}

inline void write_timing(std::ostream& out, const std::vector<MethodTiming>& timing) {
    out << "method,rounds,mean_proposal_time_s,cumulative_proposal_time_s,loglog_slope\n";
    for (const auto& t : timing) {
        const double rounds = static_cast<double>(t.mean_ns_per_round.size());
        const double cumulative_s = t.cumulative_ns * 1e-9;
        out << csv_field(t.method) << ',' << t.mean_ns_per_round.size() << ','
            << format_double(rounds > 0 ? cumulative_s / rounds : 0.0) << ',' << format_double(cumulative_s) << ','
            << (t.slope ? format_double(*t.slope) : "") << '\n';
    }
}

} // namespace ennbo

#endif
