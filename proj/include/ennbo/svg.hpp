#ifndef ENNBO_SVG_HPP
#define ENNBO_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace ennbo::svg {

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> band_lo; // optional; same length as ys when present
    std::vector<double> band_hi;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

} // namespace detail

/// Static line plot with optional shaded bands. Points that cannot be shown
/// on a log axis (nonpositive) are dropped. Output has no timestamps, so it
/// is a pure function of its inputs.
inline std::string line_plot(const std::vector<Series>& series, const PlotOptions& opt) {
    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    auto ok = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0.0) && (!opt.log_y || y > 0.0);
    };

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
            std::vector<double> ys{s.ys[i]};
            if (i < s.band_lo.size()) {
                ys.push_back(s.band_lo[i]);
            }
            if (i < s.band_hi.size()) {
                ys.push_back(s.band_hi[i]);
            }
            for (double y : ys) {
                if (ok(s.xs[i], y)) {
                    xmin = std::min(xmin, tx(s.xs[i]));
                    xmax = std::max(xmax, tx(s.xs[i]));
                    ymin = std::min(ymin, ty(y));
                    ymax = std::max(ymax, ty(y));
                }
            }
        }
    }
    if (!(xmin <= xmax)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double left = 80.0;
    const double right = 200.0;
    const double top = 40.0;
    const double bottom = 60.0;
    const double pw = opt.width - left - right;
    const double ph = opt.height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return top + ph - (ty(v) - ymin) / (ymax - ymin) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::escape(opt.title) + "</text>\n";
    o += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\"" + detail::num(pw) +
         "\" height=\"" + detail::num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double gx = left + pw * i / 4.0;
        const double gy = top + ph - ph * i / 4.0;
        o += "<text x=\"" + detail::num(gx) + "\" y=\"" + detail::num(top + ph + 18) + "\" text-anchor=\"middle\">" +
             detail::tick(opt.log_x ? std::pow(10.0, fx) : fx) + "</text>\n";
        o += "<text x=\"" + detail::num(left - 6) + "\" y=\"" + detail::num(gy + 4) + "\" text-anchor=\"end\">" +
             detail::tick(opt.log_y ? std::pow(10.0, fy) : fy) + "</text>\n";
    }
    o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"" + detail::num(opt.height - 16.0) +
         "\" text-anchor=\"middle\">" + detail::escape(opt.x_label) + "</text>\n";
    o += "<text x=\"18\" y=\"" + detail::num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         detail::num(top + ph / 2) + ")\">" + detail::escape(opt.y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::size_t n = std::min(s.xs.size(), s.ys.size());
        if (s.band_lo.size() == n && s.band_hi.size() == n && n > 0) {
            std::string pts;
            for (std::size_t i = 0; i < n; ++i) {
                if (ok(s.xs[i], s.band_hi[i])) {
                    pts += detail::num(px(s.xs[i])) + "," + detail::num(py(s.band_hi[i])) + " ";
                }
            }
            for (std::size_t i = n; i-- > 0;) {
                if (ok(s.xs[i], s.band_lo[i])) {
                    pts += detail::num(px(s.xs[i])) + "," + detail::num(py(s.band_lo[i])) + " ";
                }
            }
            o += "<polygon class=\"band\" points=\"" + pts + "\" fill=\"" + detail::color(k) +
                 "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        }
        std::string pts;
        for (std::size_t i = 0; i < n; ++i) {
            if (ok(s.xs[i], s.ys[i])) {
                pts += detail::num(px(s.xs[i])) + "," + detail::num(py(s.ys[i])) + " ";
            }
        }
        o += "<polyline class=\"line\" points=\"" + pts + "\" fill=\"none\" stroke=\"" + detail::color(k) +
             "\" stroke-width=\"1.5\"/>\n";
        const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
        o += "<line x1=\"" + detail::num(left + pw + 12) + "\" y1=\"" + detail::num(ly - 4) + "\" x2=\"" +
             detail::num(left + pw + 32) + "\" y2=\"" + detail::num(ly - 4) + "\" stroke=\"" + detail::color(k) +
             "\" stroke-width=\"2\"/>\n";
        o += "<text class=\"legend\" x=\"" + detail::num(left + pw + 36) + "\" y=\"" + detail::num(ly) + "\">" +
             detail::escape(s.label) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

} // namespace ennbo::svg

#endif
