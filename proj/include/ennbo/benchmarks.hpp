#ifndef ENNBO_BENCHMARKS_HPP
#define ENNBO_BENCHMARKS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ennbo/core.hpp"

namespace ennbo {

/// Known global minimum of a test function in its native coordinates.
struct KnownOptimum {
    std::vector<double> location;
    double value;
};

/// Analytic test function on a native box [lower, upper]^D. `native` is the
/// published (minimization) form; evaluate() negates it so every problem is
/// maximized.
struct TestFunction {
    std::string name;
    double lower;
    double upper;
    std::function<double(std::span<const double>)> native;
    // Empty when the optimum is not known in closed form for this D.
    std::function<std::optional<KnownOptimum>(std::size_t)> optimum;
    bool center_optimal = false;
};

namespace functions {

using std::numbers::pi;

inline double ackley(std::span<const double> x) {
    const double d = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * pi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

inline double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        s += v * v - 10.0 * std::cos(2.0 * pi * v);
    }
    return s;
}

inline double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double a = x[i + 1] - x[i] * x[i];
        double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

inline double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

inline double levy(std::span<const double> x) {
    auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
    const std::size_t d = x.size();
    double s1 = std::sin(pi * w(0));
    double s = s1 * s1;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        double wi = w(i);
        double t = std::sin(pi * wi + 1.0);
        s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * t * t);
    }
    double wd = w(d - 1);
    double t = std::sin(2.0 * pi * wd);
    s += (wd - 1.0) * (wd - 1.0) * (1.0 + t * t);
    return s;
}

inline double griewank(std::span<const double> x) {
    double s = 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s - p + 1.0;
}

inline double schwefel(std::span<const double> x) {
    double s = 418.9828872724338 * static_cast<double>(x.size());
    for (double v : x) {
        s -= v * std::sin(std::sqrt(std::abs(v)));
    }
    return s;
}

inline double zakharov(std::span<const double> x) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

inline double styblinski_tang(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        double v2 = v * v;
        s += v2 * v2 - 16.0 * v2 + 5.0 * v;
    }
    return 0.5 * s;
}

inline double michalewicz(std::span<const double> x) {
    constexpr int m = 10;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / pi);
        s -= std::sin(x[i]) * std::pow(t, 2 * m);
    }
    return s;
}

} // namespace functions

namespace detail {

inline auto at(double coordinate, double value) {
    return [=](std::size_t d) -> std::optional<KnownOptimum> {
        return KnownOptimum{std::vector<double>(d, coordinate), value};
    };
}

} // namespace detail

/// The shipped function suite, addressable by lowercase name.
inline const std::vector<TestFunction>& function_registry() {
    static const std::vector<TestFunction> registry = [] {
        std::vector<TestFunction> r;
        r.push_back({"ackley", -32.768, 32.768, functions::ackley, detail::at(0.0, 0.0), true});
        r.push_back({"rastrigin", -5.12, 5.12, functions::rastrigin, detail::at(0.0, 0.0), true});
        r.push_back({"rosenbrock", -5.0, 10.0, functions::rosenbrock, detail::at(1.0, 0.0), false});
        r.push_back({"sphere", -1.0, 1.0, functions::sphere, detail::at(0.0, 0.0), true});
        r.push_back({"levy", -10.0, 10.0, functions::levy, detail::at(1.0, 0.0), false});
        r.push_back({"griewank", -600.0, 600.0, functions::griewank, detail::at(0.0, 0.0), true});
        r.push_back({"schwefel", -500.0, 500.0, functions::schwefel, detail::at(420.968746, 0.0), false});
        r.push_back({"zakharov", -5.0, 10.0, functions::zakharov, detail::at(0.0, 0.0), false});
        r.push_back({"styblinski-tang", -5.0, 5.0, functions::styblinski_tang,
                     [](std::size_t d) -> std::optional<KnownOptimum> {
                         return KnownOptimum{std::vector<double>(d, -2.903534027771178),
                                             -39.16616570377142 * static_cast<double>(d)};
                     },
                     false});
        r.push_back({"michalewicz", 0.0, std::numbers::pi, functions::michalewicz,
                     [](std::size_t d) -> std::optional<KnownOptimum> {
                         if (d == 2) {
                             return KnownOptimum{{2.202905513296628, 1.570796326794897}, -1.801303410098554};
                         }
                         return std::nullopt;
                     },
                     false});
        return r;
    }();
    return registry;
}

inline std::string function_names() {
    std::string s;
    for (const auto& f : function_registry()) {
        s += (s.empty() ? "" : ", ") + f.name;
    }
    return s;
}

class UnknownFunctionError : public std::invalid_argument {
public:
    explicit UnknownFunctionError(const std::string& name)
        : std::invalid_argument("unknown function \"" + name + "\"; available: " + function_names()) {}
};

inline const TestFunction& find_function(std::string_view name) {
    for (const auto& f : function_registry()) {
        if (f.name == name) {
            return f;
        }
    }
    throw UnknownFunctionError(std::string(name));
}

enum class DistortionMode {
    corrected,     // lower branch (x - x0) / x0: fixes both boundaries
    paper_literal, // lower branch (x - x0) / (1 + x0)
};

inline DistortionMode parse_distortion_mode(std::string_view s) {
    if (s == "corrected") {
        return DistortionMode::corrected;
    }
    if (s == "paper-literal") {
        return DistortionMode::paper_literal;
    }
    throw std::invalid_argument("distortion mode must be \"corrected\" or \"paper-literal\", got \"" +
                                std::string(s) + "\"");
}

inline std::string_view to_string(DistortionMode m) {
    return m == DistortionMode::corrected ? "corrected" : "paper-literal";
}

/// Random re-centering of a test function: x0 maps to the native center,
/// 0 and 1 map to the native bounds, piecewise linear in between.
class Distortion {
public:
    explicit Distortion(std::vector<double> x0, DistortionMode mode = DistortionMode::corrected)
        : x0_(std::move(x0)), mode_(mode) {
        if (x0_.empty()) {
            throw std::invalid_argument("Distortion: x0 must have at least one coordinate");
        }
        for (double c : x0_) {
            if (!(c > 0.0 && c < 1.0)) {
                throw std::invalid_argument("Distortion: x0 coordinates must lie strictly inside (0,1)");
            }
        }
    }

    static Distortion random(std::size_t dimension, RngStream& rng, DistortionMode mode = DistortionMode::corrected) {
        std::vector<double> x0(dimension);
        for (auto& c : x0) {
            c = rng.uniform_open();
        }
        return Distortion(std::move(x0), mode);
    }

    std::size_t dimension() const { return x0_.size(); }
    std::span<const double> x0() const { return x0_; }
    DistortionMode mode() const { return mode_; }

    double distort_coord(double x, std::size_t j) const {
        const double c = x0_[j];
        if (x < c) {
            return (x - c) / (mode_ == DistortionMode::corrected ? c : 1.0 + c);
        }
        return (x - c) / (1.0 - c);
    }

    /// Per-dimension map into [-1, 1].
    std::vector<double> distort(std::span<const double> x) const {
        if (x.size() != x0_.size()) {
            throw std::invalid_argument("Distortion::distort: dimension mismatch");
        }
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            out[j] = distort_coord(x[j], j);
        }
        return out;
    }

private:
    std::vector<double> x0_;
    DistortionMode mode_;
};

inline std::vector<double> distort(const Design& x, const Distortion& dist) { return dist.distort(x.coords()); }

/// [-1, 1] -> [lower, upper]
inline double to_native(double u, const TestFunction& f) {
    return f.lower + 0.5 * (u + 1.0) * (f.upper - f.lower);
}

/// Maximization-oriented value of `f` at the distorted image of `x`.
inline double evaluate(const TestFunction& f, const Distortion& dist, std::span<const double> x) {
    auto u = dist.distort(x);
    for (auto& v : u) {
        v = to_native(v, f);
    }
    return -f.native(u);
}

inline double evaluate(const TestFunction& f, const Distortion& dist, const Design& x) {
    return evaluate(f, dist, x.coords());
}

} // namespace ennbo

#endif
