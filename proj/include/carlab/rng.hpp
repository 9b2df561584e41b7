#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace carlab {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// Fold one word into a running seed hash.
constexpr std::uint64_t hash_word(std::uint64_t h, std::uint64_t w) noexcept {
    return mix64(h ^ mix64(w + kGolden));
}

/// FNV-1a over bytes, used to turn tags like "angles" into seed words.
constexpr std::uint64_t hash_str(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Stream-splitting rule used everywhere in this project:
///     derived = mix64(base + golden) folded with hash_word over the words,
/// e.g. trial seeds are derive_seed(base_seed, hash_str(experiment_id), depth,
/// trial). Derived streams are reproducible independently of scheduling order.
template <class... W>
constexpr std::uint64_t derive_seed(std::uint64_t base, W... words) noexcept {
    std::uint64_t h = mix64(base + kGolden);
    ((h = hash_word(h, static_cast<std::uint64_t>(words))), ...);
    return h;
}

/// Counter-based generator: the n-th output is mix64(seed + n*golden), a pure
/// function of (seed, counter). Distributions are hand-rolled so sequences are
/// bitwise reproducible across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n), n >= 1 (fixed-point multiply, no rejection).
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; the companion draw is cached.
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.141592653589793238462643383279502884 * uniform01();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace carlab
