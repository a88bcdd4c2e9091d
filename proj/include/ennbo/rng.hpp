#ifndef ENNBO_RNG_HPP
#define ENNBO_RNG_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ennbo {

// Counter-based generator. Output i of a stream is the SplitMix64 finalizer
// applied to key + i * gamma, so a (seed, stream) pair fully determines the
// sequence and independent streams can be split off without shared state.
// Everything below is integer arithmetic or exact scaling, so draws are
// identical on every platform (unlike the std:: distributions).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream), key_(mix(mix(seed) ^ (stream * kGamma + kStreamSalt))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t draws() const { return counter_; }

    std::uint64_t next_u64() {
        ++counter_;
        return mix(key_ + counter_ * kGamma);
    }

    // [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1), never returns either endpoint.
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (lo == hi) {
            return lo;
        }
        double v = lo + (hi - lo) * uniform();
        return v < hi ? v : lo;
    }

    // Unbiased integer in [0, n) (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("RngStream::below: n must be positive");
        }
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Independent child stream; does not advance this stream.
    RngStream split(std::uint64_t id) const { return RngStream(key_, mix(id + kStreamSalt)); }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += kGamma;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kStreamSalt = 0x632be59bd9b4e019ULL;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace ennbo

#endif
