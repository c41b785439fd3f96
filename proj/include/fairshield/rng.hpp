#pragma once

#include <cstdint>
#include <initializer_list>

namespace fairshield {

// Counter-based generator built on the splitmix64 finalizer. Every draw is a
// pure function of (key, counter), so streams can be replayed, split, and
// compared across runs and platforms without shared state.
namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Derives a child key from a parent key and any number of indices.
/// derive(k, {i}) != derive(k, {j}) for i != j with overwhelming probability.
inline std::uint64_t derive_key(std::uint64_t key, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t k = detail::splitmix64(key);
    for (std::uint64_t idx : indices) {
        k = detail::splitmix64(k ^ detail::splitmix64(idx + detail::kGolden));
    }
    return k;
}

/// A seeded stream of uniforms. Copying the struct forks the stream at its
/// current position.
struct Rng {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    explicit Rng(std::uint64_t k = 0) : key(k) {}

    std::uint64_t next_u64() { return detail::splitmix64(key + (++counter) * detail::kGolden); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }
};

} // namespace fairshield
