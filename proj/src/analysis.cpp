#include "rmode/analysis.hpp"

#include "fft.hpp"
#include "rmode/errors.hpp"
#include "rmode/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace rmode {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// sin/cos of 2 pi f t at sample i, with the phase reduced in extended precision.
struct ToneBasis {
    long double f;
    long double t0;
    long double inv_fs;

    std::pair<double, double> operator()(std::size_t i) const noexcept {
        long double cyc = f * (t0 + static_cast<long double>(i) * inv_fs);
        cyc -= std::floor(cyc);
        const double a = two_pi * static_cast<double>(cyc);
        return {std::sin(a), std::cos(a)};
    }
};

void check_tone_request(const SignalBuffer& x, double freq_hz, SampleRange w) {
    if (!(freq_hz > 0.0) || !(freq_hz < x.sample_rate() / 2.0))
        throw DomainError("estimate_tone: frequency " + std::to_string(freq_hz) +
                          " Hz must lie in (0, sample_rate / 2)");
    if (w.end > x.size() || w.begin >= w.end)
        throw EstimationError("estimate_tone: window [" + std::to_string(w.begin) + ", " +
                              std::to_string(w.end) + ") is empty or outside the buffer");
    const double periods = static_cast<double>(w.size()) / x.sample_rate() * freq_hz;
    if (periods < 8.0)
        throw EstimationError("estimate_tone: window spans " + std::to_string(periods) +
                              " periods, need at least 8");
}

double wrap_pi(double a) {
    a = std::remainder(a, two_pi);
    return a <= -std::numbers::pi ? a + two_pi : a;
}

}  // namespace

ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz, SampleRange window) {
    check_tone_request(x, freq_hz, window);
    const ToneBasis basis{freq_hz, x.start_time() + static_cast<long double>(window.begin) / x.sample_rate(),
                          1.0L / static_cast<long double>(x.sample_rate())};
    const double* px = x.data() + window.begin;
    const std::size_t n = window.size();

    // ss, cc, sc, xs, xc
    const auto sums = parallel::chunked_sums<5>(n, [&](std::size_t i, std::array<double, 5>& acc) {
        const auto [s, c] = basis(i);
        acc[0] += s * s;
        acc[1] += c * c;
        acc[2] += s * c;
        acc[3] += px[i] * s;
        acc[4] += px[i] * c;
    });
    const double det = sums[0] * sums[1] - sums[2] * sums[2];
    if (!(det > 0.0)) throw EstimationError("estimate_tone: singular normal equations");
    const double a = (sums[3] * sums[1] - sums[4] * sums[2]) / det;
    const double b = (sums[4] * sums[0] - sums[3] * sums[2]) / det;

    const double sq = parallel::chunked_sum(n, [&](std::size_t i) {
        const auto [s, c] = basis(i);
        const double r = px[i] - a * s - b * c;
        return r * r;
    });

    ToneEstimate est;
    est.freq_hz = freq_hz;
    est.amplitude = std::hypot(a, b);
    est.phase_rad = est.amplitude > 0.0 ? wrap_pi(std::atan2(b, a)) : 0.0;
    est.residual_rms = std::sqrt(sq / static_cast<double>(n));
    return est;
}

ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz) {
    return estimate_tone(x, freq_hz, SampleRange{0, x.size()});
}

ToneEstimate estimate_tone_frequency(const SignalBuffer& x, double low_hz, double high_hz,
                                     SampleRange window, double resolution_hz) {
    if (!(low_hz > 0.0) || !(high_hz > low_hz) || !(resolution_hz > 0.0))
        throw DomainError("estimate_tone_frequency: need 0 < low_hz < high_hz and resolution_hz > 0");
    const double span_s = static_cast<double>(window.size()) / x.sample_rate();
    if (!(span_s > 0.0)) throw EstimationError("estimate_tone_frequency: empty window");
    // Smaller is better; the residual vanishes at the frequency of a pure tone.
    auto cost = [&](double f) { return estimate_tone(x, f, window).residual_rms; };

    // A quarter of the main-lobe half width keeps the best grid point on the lobe.
    const double step = std::min(0.25 / span_s, (high_hz - low_hz) / 4.0);
    const auto points = static_cast<std::size_t>(std::ceil((high_hz - low_hz) / step));
    double best_f = low_hz;
    double best_a = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= points; ++i) {
        const double f = std::min(high_hz, low_hz + static_cast<double>(i) * step);
        const double a = cost(f);
        if (a < best_a) {
            best_a = a;
            best_f = f;
        }
    }

    double lo = std::max(low_hz, best_f - step);
    double hi = std::min(high_hz, best_f + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = cost(c), fd = cost(d);
    while (hi - lo > resolution_hz) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = cost(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = cost(d);
        }
    }
    return estimate_tone(x, 0.5 * (lo + hi), window);
}

SampleRange hilbert_valid_range(std::size_t n) noexcept {
    if (n <= 2 * hilbert_edge_samples) return {0, 0};
    return {hilbert_edge_samples, n - hilbert_edge_samples};
}

namespace {

// Analytic signal in extended precision, length x.size().
std::vector<std::complex<long double>> analytic_signal_extended(const SignalBuffer& x) {
    const std::size_t n = x.size();
    if (n < hilbert_min_samples)
        throw SizeError("analytic signal needs at least " + std::to_string(hilbert_min_samples) +
                        " samples, got " + std::to_string(n));
    // Zero padding keeps the transform linear rather than circular near the ends.
    const std::size_t len = detail::fast_fft_size(n + hilbert_padding_samples);
    std::vector<long double> padded(len, 0.0L);
    std::copy(x.data(), x.data() + n, padded.begin());

    const detail::AnalyticFft fft(len);
    std::vector<std::complex<long double>> z(len);
    fft.forward(padded.data(), z.data());
    padded = {};

    // One-sided gain 2 with raised-cosine roll-off to zero at DC and Nyquist.
    const long double nyquist = 0.5L * static_cast<long double>(len);
    const long double ramp = static_cast<long double>(len) * hilbert_taper_fraction;
    const long double scale = 1.0L / static_cast<long double>(len);
    const auto count = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const long double edge = std::min(static_cast<long double>(uk), nyquist - static_cast<long double>(uk));
        if (edge <= 0.0L) {
            z[uk] = 0.0L;
            continue;
        }
        long double gain = 2.0L;
        if (edge < ramp) gain *= 0.5L * (1.0L - std::cos(std::numbers::pi_v<long double> * edge / ramp));
        z[uk] *= gain * scale;
    }
    fft.inverse(z.data());
    z.resize(n);
    z.shrink_to_fit();
    return z;
}

}  // namespace

std::vector<std::complex<double>> analytic_signal(const SignalBuffer& x) {
    const auto z = analytic_signal_extended(x);
    std::vector<std::complex<double>> out(z.size());
    const auto len = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < len; ++i) out[i] = std::complex<double>(z[i]);
    return out;
}

std::vector<double> hilbert_transform(const SignalBuffer& x) {
    const auto z = analytic_signal_extended(x);
    std::vector<double> h(z.size());
    const auto len = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < len; ++i) h[i] = static_cast<double>(z[i].imag());
    return h;
}

SignalBuffer analytic_envelope(const SignalBuffer& x) {
    const auto z = analytic_signal_extended(x);
    std::vector<double> e(z.size());
    const auto len = static_cast<std::ptrdiff_t>(e.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < len; ++i) e[i] = static_cast<double>(std::abs(z[i]));
    return SignalBuffer(std::move(e), x.sample_rate(), x.start_time());
}

SignalBuffer instantaneous_phase(const SignalBuffer& x) {
    const auto z = analytic_signal_extended(x);
    std::vector<double> h(z.size());
    const auto len = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < len; ++i) h[i] = static_cast<double>(std::arg(z[i]));

    double prev = h[0];
    double offset = 0.0;
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double raw = h[i];
        offset += wrap_pi(raw - prev) - (raw - prev);
        prev = raw;
        h[i] = raw + offset;
    }
    return SignalBuffer(std::move(h), x.sample_rate(), x.start_time());
}

std::vector<SpectrumBin> power_spectrum(const SignalBuffer& x, std::size_t segment_len) {
    const std::size_t len = segment_len;
    if (len < 2 || (len & (len - 1)) != 0)
        throw DomainError("power_spectrum: segment_len must be a power of two >= 2, got " +
                          std::to_string(len));
    if (len > x.size())
        throw DomainError("power_spectrum: segment_len " + std::to_string(len) +
                          " exceeds buffer length " + std::to_string(x.size()));

    const std::size_t hop = len / 2;
    const std::size_t segments = 1 + (x.size() - len) / hop;
    const std::size_t bins = len / 2 + 1;

    std::vector<double> window(len);
    double window_energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(len));
        window_energy += window[i] * window[i];
    }

    const detail::RealFft fft(len);
    std::vector<double> acc(bins, 0.0);

    // Segments are transformed in parallel blocks and accumulated in order.
    constexpr std::size_t block = 16;
    std::vector<double> block_power(block * bins);
    for (std::size_t first = 0; first < segments; first += block) {
        const std::size_t in_block = std::min(block, segments - first);
        const auto count = static_cast<std::ptrdiff_t>(in_block);
#pragma omp parallel
        {
            std::vector<double> frame(len);
            std::vector<std::complex<double>> frame_bins(bins);
#pragma omp for schedule(static)
            for (std::ptrdiff_t b = 0; b < count; ++b) {
                const double* src = x.data() + (first + static_cast<std::size_t>(b)) * hop;
                for (std::size_t i = 0; i < len; ++i) frame[i] = src[i] * window[i];
                fft.forward(frame.data(), frame_bins.data());
                double* dst = block_power.data() + static_cast<std::size_t>(b) * bins;
                for (std::size_t k = 0; k < bins; ++k) dst[k] = std::norm(frame_bins[k]);
            }
        }
        for (std::size_t b = 0; b < in_block; ++b)
            for (std::size_t k = 0; k < bins; ++k) acc[k] += block_power[b * bins + k];
    }

    const double fs = x.sample_rate();
    const double norm = 1.0 / (fs * window_energy * static_cast<double>(segments));
    std::vector<SpectrumBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        double p = acc[k] * norm;
        if (k != 0 && k != bins - 1) p *= 2.0;
        out[k].freq_hz = static_cast<double>(k) * fs / static_cast<double>(len);
        out[k].power_db = 10.0 * std::log10(std::max(p, std::numeric_limits<double>::min()));
    }
    return out;
}

double estimate_snr(const SignalBuffer& signal, const SignalBuffer& noisy) {
    require_aligned(signal, noisy);
    const double* ps = signal.data();
    const double* pn = noisy.data();
    const double noise = parallel::chunked_sum(signal.size(), [&](std::size_t i) {
        const double d = pn[i] - ps[i];
        return d * d;
    });
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    const double sig = mean_square(signal) * static_cast<double>(signal.size());
    return 10.0 * std::log10(sig / noise);
}

}  // namespace rmode
