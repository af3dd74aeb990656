#include "rmode/reference.hpp"

#include "phase.hpp"
#include "rmode/errors.hpp"
#include "rmode/prng.hpp"

#include <cmath>
#include <numbers>

namespace rmode::reference {

BitStream generate_bits(std::uint64_t seed, std::size_t n) {
    BitStream s;
    s.seed = seed;
    s.bits.reserve(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) s.bits.push_back(static_cast<std::uint8_t>(rng.next() >> 63));
    return s;
}

SignalBuffer msk_modulate(const BitStream& bits, const TransmitterConfig& cfg,
                          double sample_rate_hz, double duration_s) {
    require_synthesizable(cfg, sample_rate_hz);
    const std::size_t n = sample_count(sample_rate_hz, duration_s);
    const std::size_t nbits = bits_required(n, sample_rate_hz, cfg.data_rate_bps);
    if (nbits > bits.bits.size()) throw UnderrunError("reference::msk_modulate: not enough bits");

    std::vector<double> out(n);
    long double phase = detail::initial_cycles(cfg);
    std::size_t k = 0;
    std::size_t next_boundary = first_sample_of_bit(1, sample_rate_hz, cfg.data_rate_bps);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = cfg.amp_msk * std::cos(detail::cycles_to_rad(phase));
        if (i + 1 == n) break;
        const long double f = detail::keyed_freq(cfg, bits.bits[k]);
        const long double t0 = detail::sample_time(i, sample_rate_hz);
        const long double t1 = detail::sample_time(i + 1, sample_rate_hz);
        if (i + 1 >= next_boundary) {
            ++k;
            const long double tb = detail::bit_start_time(k, cfg.data_rate_bps);
            phase += f * (tb - t0) + detail::keyed_freq(cfg, bits.bits[k]) * (t1 - tb);
            next_boundary = first_sample_of_bit(k + 1, sample_rate_hz, cfg.data_rate_bps);
        } else {
            phase += f * (t1 - t0);
        }
        phase = detail::wrap_cycles(phase);
    }
    return SignalBuffer(std::move(out), sample_rate_hz, 0.0);
}

SignalBuffer generate_cw(const TransmitterConfig& cfg, CwTone which, double sample_rate_hz,
                         double duration_s) {
    require_synthesizable(cfg, sample_rate_hz);
    const std::size_t n = sample_count(sample_rate_hz, duration_s);
    const long double f = cw_freq_hz(cfg, which);
    const double amp = which == CwTone::lower ? cfg.amp_cw1 : cfg.amp_cw2;
    const double phi = which == CwTone::lower ? cfg.phase_cw1_rad : cfg.phase_cw2_rad;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = amp * std::sin(detail::cycles_to_rad(detail::wrap_cycles(f * detail::sample_time(i, sample_rate_hz))) + phi);
    return SignalBuffer(std::move(out), sample_rate_hz, 0.0);
}

DelayedSignal fractional_delay(const SignalBuffer& x, double tau_s) {
    using K = FractionalDelayKernel;
    if (x.size() < static_cast<std::size_t>(K::taps)) throw SizeError("reference::fractional_delay: short buffer");
    if (!std::isfinite(tau_s) || tau_s < 0.0) throw DomainError("reference::fractional_delay: bad tau");
    const double d = tau_s * x.sample_rate();
    std::size_t shift;
    double mu;
    if (std::abs(d - std::round(d)) < 1e-9) {
        shift = static_cast<std::size_t>(std::round(d));
        mu = 0.0;
    } else {
        shift = static_cast<std::size_t>(std::floor(d));
        mu = d - std::floor(d);
    }

    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    if (mu == 0.0) {
        for (std::size_t i = shift; i < n; ++i) out[i] = x[i - shift];
    } else {
        const std::vector<double> h = fractional_delay_taps(mu);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int m = -K::half_taps; m <= K::half_taps; ++m) {
                const auto j = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(shift) - m;
                if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) continue;
                acc += h[static_cast<std::size_t>(m + K::half_taps)] * x[static_cast<std::size_t>(j)];
            }
            out[i] = acc;
        }
    }
    SampleRange valid{std::min(n, shift + K::edge_exclusion),
                      n > K::edge_exclusion ? n - K::edge_exclusion : 0};
    if (valid.end < valid.begin) valid.end = valid.begin;
    return {SignalBuffer(std::move(out), x.sample_rate(), x.start_time()), shift, mu, valid};
}

std::vector<double> standard_normal(std::size_t n, std::uint64_t seed) {
    std::vector<double> z;
    z.reserve(n + 1);
    SplitMix64 rng(seed);
    while (z.size() < n) {
        const std::uint64_t a = rng.next();
        const std::uint64_t b = rng.next();
        const auto [g0, g1] = box_muller(a, b);
        z.push_back(g0);
        z.push_back(g1);
    }
    z.resize(n);
    return z;
}

ToneEstimate estimate_tone(const SignalBuffer& x, double freq_hz, SampleRange w) {
    if (w.end > x.size() || w.begin >= w.end) throw EstimationError("reference::estimate_tone: bad window");
    double ss = 0, cc = 0, sc = 0, xs = 0, xc = 0;
    const long double inv_fs = 1.0L / x.sample_rate();
    for (std::size_t i = w.begin; i < w.end; ++i) {
        long double cyc = freq_hz * (x.start_time() + static_cast<long double>(i) * inv_fs);
        cyc -= std::floor(cyc);
        const double a = 2.0 * std::numbers::pi * static_cast<double>(cyc);
        const double s = std::sin(a), c = std::cos(a);
        ss += s * s;
        cc += c * c;
        sc += s * c;
        xs += x[i] * s;
        xc += x[i] * c;
    }
    const double det = ss * cc - sc * sc;
    const double a = (xs * cc - xc * sc) / det;
    const double b = (xc * ss - xs * sc) / det;
    double sq = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
        long double cyc = freq_hz * (x.start_time() + static_cast<long double>(i) * inv_fs);
        cyc -= std::floor(cyc);
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(cyc);
        const double r = x[i] - a * std::sin(ang) - b * std::cos(ang);
        sq += r * r;
    }
    return {freq_hz, std::hypot(a, b), std::atan2(b, a), std::sqrt(sq / static_cast<double>(w.size()))};
}

}  // namespace rmode::reference
