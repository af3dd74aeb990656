// analysis.hpp - measurement oracles: tone fits, analytic signal, spectra, SNR
#pragma once

#include "rmode/core.hpp"

#include <complex>
#include <vector>

namespace rmode {

struct ToneEstimate {
    double freq_hz = 0.0;
    double amplitude = 0.0;
    double phase_rad = 0.0;  // x ~ amplitude * sin(2 pi f t + phase), t absolute
    double residual_rms = 0.0;
};

// Least-squares fit of a sin(wt) + b cos(wt) over `window`. Needs at least
// 8 periods of freq_hz in the window and 0 < freq_hz < sample_rate / 2.
ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz, SampleRange window);
ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz);

// Frequency of the single tone in `window`, searched over [low_hz, high_hz]:
// the least-squares residual is minimized on a coarse grid, then refined by
// golden-section search to resolution_hz. Assumes one dominant tone whose
// main lobe contains the best grid point.
ToneEstimate estimate_tone_frequency(const SignalBuffer& x, double low_hz, double high_hz,
                                     SampleRange window, double resolution_hz = 1e-4);

// Analytic-signal results are unreliable within this many samples of either end.
inline constexpr std::size_t hilbert_edge_samples = 256;
inline constexpr std::size_t hilbert_min_samples = 1024;

SampleRange hilbert_valid_range(std::size_t n) noexcept;

// The analytic signal is formed on a zero-padded copy with a one-sided
// spectral mask that rolls off (raised cosine) over the lowest and highest
// hilbert_taper_fraction of the sample rate. Content inside those bands is
// attenuated, so measured tones should sit well inside (fs/32, 15 fs/32).
inline constexpr double hilbert_taper_fraction = 1.0 / 32.0;
inline constexpr std::size_t hilbert_padding_samples = 4096;

std::vector<std::complex<double>> analytic_signal(const SignalBuffer& x);

// Computed in extended precision and rounded once to double.
// Imaginary part of the analytic signal.
std::vector<double> hilbert_transform(const SignalBuffer& x);

SignalBuffer analytic_envelope(const SignalBuffer& x);

// Unwrapped phase of the analytic signal, radians.
SignalBuffer instantaneous_phase(const SignalBuffer& x);

struct SpectrumBin {
    double freq_hz;
    double power_db;  // 10 log10 of one-sided PSD (units^2 / Hz)
};

// Welch average: periodic Hann window, 50 % overlap, no detrending,
// density scaling so that sum(psd) * df equals the mean square.
std::vector<SpectrumBin> power_spectrum(const SignalBuffer& x, std::size_t segment_len);

// 10 log10(P_signal / P_(noisy - signal)); +inf when the buffers are identical.
double estimate_snr(const SignalBuffer& signal, const SignalBuffer& noisy);

}  // namespace rmode
