// tx.hpp - MF DGNSS R-Mode transmitter: payload bits, MSK, CW ranging tones
#pragma once

#include "rmode/core.hpp"
#include "rmode/errors.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rmode {

inline constexpr double mf_band_low_hz = 285'000.0;
inline constexpr double mf_band_high_hz = 325'000.0;
inline constexpr double cw_offset_hz = 250.0;
inline constexpr double default_sample_rate_hz = 2'048'000.0;

struct TransmitterConfig {
    double carrier_freq_hz = 287'000.0;
    double data_rate_bps = 100.0;
    double amp_msk = 1.0;
    // 50 % of the total power in the MSK signal, 25 % in each tone.
    double amp_cw1 = 1.0 / std::sqrt(2.0);
    double amp_cw2 = 1.0 / std::sqrt(2.0);
    double phase_cw1_rad = 0.0;
    double phase_cw2_rad = 0.0;
    int initial_inphase_bit = +1;
    double nominal_tx_power_w = 150'000.0;  // metadata only
    // Lifts the MF band and the {100, 200} bps restriction.
    bool allow_nonstandard = false;

    double bit_period_s() const noexcept { return 1.0 / data_rate_bps; }
    // Keying frequencies f_c -/+ 1/(4T); |f1 - f0| = 1/(2T).
    double space_freq_hz() const noexcept { return carrier_freq_hz - data_rate_bps / 4.0; }
    double mark_freq_hz() const noexcept { return carrier_freq_hz + data_rate_bps / 4.0; }
};

enum class CwTone { lower = 1, upper = 2 };

double cw_freq_hz(const TransmitterConfig& cfg, CwTone which) noexcept;

// Every broken TransmitterConfig invariant for synthesis at `sample_rate_hz`.
// Field names are prefixed with `prefix` (e.g. "transmitter.").
std::vector<Violation> transmitter_violations(const TransmitterConfig& cfg, double sample_rate_hz,
                                              const std::string& prefix = "");

// Throws ConfigError listing the violations, if any.
void require_synthesizable(const TransmitterConfig& cfg, double sample_rate_hz);

struct BitStream {
    std::vector<std::uint8_t> bits;  // 0 / 1
    std::uint64_t seed = 0;
    std::vector<int> i_bits;  // +1 / -1, filled by map_bits_to_iq
    std::vector<int> q_bits;
};

// n payload bits, one per splitmix64 output (most significant bit).
BitStream generate_bits(std::uint64_t seed, std::size_t n);

// Even-indexed bits -> i_bits, odd-indexed -> q_bits, b -> 1 - 2b.
// An odd-length stream pads q_bits with +1.
BitStream map_bits_to_iq(BitStream stream);

// Channel bits whose I/Q mapping reproduces the modulator output in the
// quadrature form b cos(2 pi f_c t + d_k pi t / 2T + Phi_k), d_k = -I_k Q_k,
// Phi_k = pi/2 (1 - I_k). c_0 encodes I_0 and c_{k+1} = c_k xor b_k, so the
// result holds n + 1 bits. Interval k uses I = i_bits[(k + 1) / 2] and
// Q = q_bits[k / 2]: I changes only at odd bit boundaries, Q only at even ones.
BitStream differential_precode(const BitStream& payload, int initial_inphase_bit);

std::size_t sample_count(double sample_rate_hz, double duration_s);

// First sample index at or after the start of bit k.
std::size_t first_sample_of_bit(std::size_t k, double sample_rate_hz, double data_rate_bps);

// Bit intervals touched by the first n samples.
std::size_t bits_required(std::size_t n_samples, double sample_rate_hz, double data_rate_bps);

// Continuous-phase MSK: during bit k the instantaneous frequency is f0 (bit 0)
// or f1 (bit 1); phase starts at pi/2 (1 - I_0) and is accumulated, including
// the sub-sample split at boundaries that fall between samples.
SignalBuffer msk_modulate(const BitStream& bits, const TransmitterConfig& cfg,
                          double sample_rate_hz, double duration_s);

// b_cw sin(2 pi (f_c -/+ 250) t + Phi_cw).
SignalBuffer generate_cw(const TransmitterConfig& cfg, CwTone which, double sample_rate_hz,
                         double duration_s);

SignalBuffer compose_transmit(const SignalBuffer& msk, const SignalBuffer& cw1,
                              const SignalBuffer& cw2);

}  // namespace rmode
