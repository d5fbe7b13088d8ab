#pragma once

#include <cstdint>
#include <vector>

namespace cosym {

/// Default seed recorded in every report; override with --seed.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// splitmix64: deterministic across platforms, unlike the standard library
/// distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::vector<double> uniform_vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::uint64_t state_;
};

/// Halton quasi-random sequence; used for ball sampling in the stability
/// estimates so refinement (more points) extends rather than reshuffles the
/// sample.
inline double halton(std::size_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index + 1;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

inline std::vector<double> halton_point(std::size_t index, std::size_t dim) {
    static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                      23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) p[d] = halton(index, primes[d % 16]);
    return p;
}

} // namespace cosym
