// reference.hpp - serial reference kernels
//
// Straight-line single-threaded versions of the parallel kernels. They are kept
// for cross-checking in tests and as the baseline in the benchmarks; nothing in
// the simulator pipeline calls them.
#pragma once

#include "rmode/analysis.hpp"
#include "rmode/channel.hpp"
#include "rmode/tx.hpp"

namespace rmode::reference {

// Sequential SplitMix64::next() stream, one bit (MSB) per output.
BitStream generate_bits(std::uint64_t seed, std::size_t n);

// One phase accumulator for the whole buffer: theta[n+1] = theta[n] + integral
// of 2 pi f(t) over [t_n, t_{n+1}], split at a bit boundary when one falls inside.
SignalBuffer msk_modulate(const BitStream& bits, const TransmitterConfig& cfg,
                          double sample_rate_hz, double duration_s);

SignalBuffer generate_cw(const TransmitterConfig& cfg, CwTone which, double sample_rate_hz,
                         double duration_s);

DelayedSignal fractional_delay(const SignalBuffer& x, double tau_s);

std::vector<double> standard_normal(std::size_t n, std::uint64_t seed);

// Plain left-to-right sums.
ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz, SampleRange window);

}  // namespace rmode::reference
