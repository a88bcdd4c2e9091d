#ifndef ENNBO_CORE_HPP
#define ENNBO_CORE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ennbo/rng.hpp"

namespace ennbo {

/// A point in the unit hypercube [0,1]^D.
class Design {
public:
    Design() = default;

    explicit Design(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) {
            throw std::invalid_argument("Design: dimension must be at least 1");
        }
        for (std::size_t j = 0; j < coords_.size(); ++j) {
            double c = coords_[j];
            if (!(c >= 0.0 && c <= 1.0)) {
                throw std::invalid_argument("Design: coordinate " + std::to_string(j) + " = " +
                                            std::to_string(c) + " is outside [0,1]");
            }
        }
    }

    std::size_t dimension() const { return coords_.size(); }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t j) const { return coords_[j]; }

    friend bool operator==(const Design&, const Design&) = default;

private:
    std::vector<double> coords_;
};

struct Observation {
    Design design;
    double value = 0.0;
};

/// Surrogate output at a query design. sigma2 is uncalibrated and lives in
/// squared-distance units, unrelated to the scale of mu.
struct Estimate {
    double mu = 0.0;
    double sigma2 = 0.0;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("squared_distance: dimension mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

inline double squared_distance(const Design& a, const Design& b) { return squared_distance(a.coords(), b.coords()); }

/// Append-only store of observations sharing one dimension. Coordinates are
/// kept row-major in one buffer so the neighbor scan walks contiguous memory.
class Dataset {
public:
    explicit Dataset(std::size_t dimension) : dimension_(dimension) {
        if (dimension == 0) {
            throw std::invalid_argument("Dataset: dimension must be at least 1");
        }
    }

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::span<const double> coords(std::size_t i) const {
        return {coords_.data() + i * dimension_, dimension_};
    }
    double value(std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    Observation observation(std::size_t i) const {
        auto row = coords(i);
        return {Design(std::vector<double>(row.begin(), row.end())), values_[i]};
    }

    void append(const Observation& obs) {
        if (obs.design.dimension() != dimension_) {
            throw std::invalid_argument("Dataset::append: design has dimension " +
                                        std::to_string(obs.design.dimension()) + ", dataset has " +
                                        std::to_string(dimension_));
        }
        if (!std::isfinite(obs.value)) {
            throw std::invalid_argument("Dataset::append: observation value must be finite");
        }
        auto c = obs.design.coords();
        coords_.insert(coords_.end(), c.begin(), c.end());
        values_.push_back(obs.value);
    }

    void clear() {
        coords_.clear();
        values_.clear();
    }

    /// Index of the largest value; lowest index on ties. Dataset must be nonempty.
    std::size_t best_index() const {
        if (values_.empty()) {
            throw std::logic_error("Dataset::best_index: dataset is empty");
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < values_.size(); ++i) {
            if (values_[i] > values_[best]) {
                best = i;
            }
        }
        return best;
    }

private:
    std::size_t dimension_;
    std::vector<double> coords_;
    std::vector<double> values_;
};

/// Functional form of Dataset::append.
inline Dataset dataset_append(Dataset ds, const Observation& obs) {
    ds.append(obs);
    return ds;
}

inline Design uniform_design(std::size_t dimension, RngStream& rng) {
    std::vector<double> x(dimension);
    for (auto& c : x) {
        c = rng.uniform();
    }
    return Design(std::move(x));
}

} // namespace ennbo

#endif
