#pragma once

#include <cmath>
#include <cstdint>

namespace umap {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based generator keyed by (seed, k1, k2, k3). Each key opens an
// independent stream, so the draws consumed for one (epoch, i, j) cell are
// identical no matter which cells are visited around it. This is what lets
// the optimizer iterate stored edges only while matching the full double
// loop draw-for-draw.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed,
                        std::uint64_t k1 = 0, std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
        state_ = splitmix64(splitmix64(splitmix64(splitmix64(seed) ^ k1) ^ k2) ^ k3);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform index in {0, ..., n-1}.
    std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace umap
