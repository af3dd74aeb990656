// prng.hpp - splitmix64 stream and Box-Muller Gaussian variates
//
// The payload bits and the channel noise must regenerate byte-exactly on any
// platform, so the generator is pinned to splitmix64 rather than <random>.
// splitmix64 is counter based: output k of seed s is mix(s + (k + 1) * gamma),
// which lets parallel kernels address any position of the stream directly.
#pragma once

#include <cstdint>
#include <utility>

namespace rmode {

inline constexpr std::uint64_t splitmix64_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// k-th output (0-based) of the stream seeded with `seed`.
constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) noexcept {
    return splitmix64_mix(seed + (k + 1) * splitmix64_gamma);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += splitmix64_gamma;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

// Top 53 bits mapped to (0, 1]; never zero, so log() is safe.
constexpr double unit_open_closed(std::uint64_t x) noexcept {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

// Top 53 bits mapped to [0, 1).
constexpr double unit_closed_open(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Standard normal pair from two consecutive stream outputs (a first, b second):
// r = sqrt(-2 ln u1), u1 from a; angle 2 pi u2, u2 from b; returns (r cos, r sin).
std::pair<double, double> box_muller(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace rmode
