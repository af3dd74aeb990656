// phase.hpp - phase bookkeeping in cycles, shared by the tx kernels
#pragma once

#include "rmode/tx.hpp"

#include <cmath>
#include <numbers>

namespace rmode::detail {

// Phase is carried in cycles, wrapped to [0, 1), in extended precision so that
// seconds-long buffers at ~300 kHz keep sub-nanoradian accuracy.
inline long double wrap_cycles(long double c) noexcept { return c - std::floor(c); }

inline double cycles_to_rad(long double c) noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(c);
}

inline long double keyed_freq(const TransmitterConfig& cfg, std::uint8_t bit) noexcept {
    const long double quarter = static_cast<long double>(cfg.data_rate_bps) / 4.0L;
    return static_cast<long double>(cfg.carrier_freq_hz) + (bit ? quarter : -quarter);
}

inline long double initial_cycles(const TransmitterConfig& cfg) noexcept {
    // Phi_0 = pi/2 (1 - I_0)
    return cfg.initial_inphase_bit > 0 ? 0.0L : 0.5L;
}

inline long double bit_start_time(std::size_t k, double data_rate_bps) noexcept {
    return static_cast<long double>(k) / static_cast<long double>(data_rate_bps);
}

inline long double sample_time(std::size_t n, double sample_rate_hz) noexcept {
    return static_cast<long double>(n) / static_cast<long double>(sample_rate_hz);
}

}  // namespace rmode::detail
