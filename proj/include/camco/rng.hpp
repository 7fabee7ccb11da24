#pragma once

#include <cstdint>
#include <string_view>

namespace camco {

// Counter-based splitmix64 stream. Standard-library distributions are
// implementation-defined, so everything here is plain integer arithmetic:
// two runs with the same keys produce identical bytes on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kGolden)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Derive an independent substream; derivation is order-insensitive
    /// w.r.t. sibling streams (keyed, not sequential).
    Rng derive(std::uint64_t key) const { return Rng(mix(state_ ^ mix(key))); }
    Rng derive(std::string_view label) const { return derive(fnv1a(label)); }

    std::uint64_t next_u64() {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi].
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [lo, hi] inclusive. Multiply-shift bounding;
    /// bias < 2^-32 for any range used here.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * span;
        return lo + static_cast<std::int64_t>(wide >> 64);
    }

    bool next_bool(double p_true) { return next_unit() < p_true; }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
    std::uint64_t state_;
};

/// Stream for one sampling purpose inside one episode of one run.
inline Rng episode_rng(std::uint64_t run_seed, std::uint64_t episode_index,
                       std::string_view purpose) {
    return Rng(run_seed).derive(episode_index).derive(purpose);
}

} // namespace camco
