#pragma once

#include <cstdint>

namespace mskel {

// Counter-based pseudo-randomness. Every consumer addresses its draws by
// (seed, counter), so results never depend on evaluation order or thread
// schedule.

namespace detail {

inline constexpr std::uint64_t kStreamStride = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kRejectStride = 0xD1B54A32D192ED03ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// The counter-th output of a SplitMix64 stream seeded with `seed`.
constexpr std::uint64_t derive_u64(std::uint64_t seed, std::uint64_t counter) {
    return detail::mix64(seed + (counter + 1) * detail::kStreamStride);
}

/// Uniform draw from [0, bound) addressed by (seed, counter). Rejection
/// sampling removes modulo bias; the rejection chain is private to the
/// counter so neighbouring counters stay independent.
constexpr std::uint32_t uniform_below(std::uint64_t seed, std::uint64_t counter,
                                      std::uint32_t bound) {
    const std::uint64_t threshold = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t state = seed + (counter + 1) * detail::kStreamStride;
    for (;;) {
        std::uint64_t v = detail::mix64(state);
        if (v <= threshold) return static_cast<std::uint32_t>(v % bound);
        state += detail::kRejectStride;
    }
}

/// Bernoulli draw addressed by (seed, counter); `prob` is clamped to [0,1].
inline bool bernoulli(std::uint64_t seed, std::uint64_t counter, double prob) {
    if (prob >= 1.0) return true;
    if (prob <= 0.0) return false;
    const auto threshold =
        static_cast<std::uint64_t>(prob * 18446744073709551616.0L /* 2^64 */);
    return derive_u64(seed, counter) < threshold;
}

}  // namespace mskel
