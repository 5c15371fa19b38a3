#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace routesim {

// Deterministic random source. All distributions are implemented here rather
// than with std::*_distribution so that a given seed produces the same draw
// sequence on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Named substream: every randomized component (traffic, exploration,
    // weight init, replay sampling) derives its own stream from the single
    // scenario seed, so components can be varied independently.
    static Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
        std::uint64_t h = fnv1a(name);
        std::uint64_t x = seed;
        x = mix(x ^ h);
        x = mix(x + 0x9e3779b97f4a7c15ull * (index + 1));
        return Rng(x);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound). bound must be > 0.
    int uniform_int(int bound) {
        const auto b = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<int>(v % b);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    static constexpr std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace routesim
