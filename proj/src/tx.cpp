#include "rmode/tx.hpp"

#include "phase.hpp"
#include "rmode/prng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rmode {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

double cw_freq_hz(const TransmitterConfig& cfg, CwTone which) noexcept {
    return which == CwTone::lower ? cfg.carrier_freq_hz - cw_offset_hz
                                  : cfg.carrier_freq_hz + cw_offset_hz;
}

std::vector<Violation> transmitter_violations(const TransmitterConfig& cfg, double sample_rate_hz,
                                              const std::string& prefix) {
    std::vector<Violation> out;
    auto add = [&](const char* field, std::string value, std::string constraint) {
        out.push_back({prefix + field, std::move(value), std::move(constraint)});
    };

    if (!std::isfinite(cfg.carrier_freq_hz) || cfg.carrier_freq_hz <= 0.0)
        add("carrier_freq_hz", num(cfg.carrier_freq_hz), "must be finite and > 0");
    else if (!cfg.allow_nonstandard &&
             (cfg.carrier_freq_hz < mf_band_low_hz || cfg.carrier_freq_hz > mf_band_high_hz))
        add("carrier_freq_hz", num(cfg.carrier_freq_hz),
            "outside the MF DGNSS band [285000, 325000] Hz (set allow_nonstandard to override)");

    if (!std::isfinite(cfg.data_rate_bps) || cfg.data_rate_bps <= 0.0)
        add("data_rate_bps", num(cfg.data_rate_bps), "must be finite and > 0");
    else if (!cfg.allow_nonstandard && cfg.data_rate_bps != 100.0 && cfg.data_rate_bps != 200.0)
        add("data_rate_bps", num(cfg.data_rate_bps),
            "must be 100 or 200 bps (set allow_nonstandard to override)");

    const std::pair<const char*, double> amps[] = {
        {"amp_msk", cfg.amp_msk}, {"amp_cw1", cfg.amp_cw1}, {"amp_cw2", cfg.amp_cw2}};
    for (const auto& [name, a] : amps)
        if (!std::isfinite(a) || a < 0.0) add(name, num(a), "amplitude must be finite and >= 0");

    if (!std::isfinite(cfg.phase_cw1_rad)) add("phase_cw1_rad", num(cfg.phase_cw1_rad), "must be finite");
    if (!std::isfinite(cfg.phase_cw2_rad)) add("phase_cw2_rad", num(cfg.phase_cw2_rad), "must be finite");

    if (cfg.initial_inphase_bit != 1 && cfg.initial_inphase_bit != -1)
        add("initial_inphase_bit", std::to_string(cfg.initial_inphase_bit), "must be +1 or -1");

    if (!std::isfinite(cfg.nominal_tx_power_w) || cfg.nominal_tx_power_w < 0.0)
        add("nominal_tx_power_w", num(cfg.nominal_tx_power_w), "must be finite and >= 0");

    const double nyquist_floor = 2.0 * (cfg.carrier_freq_hz + 10.0 * cfg.data_rate_bps);
    if (!std::isfinite(sample_rate_hz) || !(sample_rate_hz > nyquist_floor))
        out.push_back({"sample_rate_hz", num(sample_rate_hz),
                       "must exceed 2 * (carrier_freq_hz + 10 * data_rate_bps) = " +
                           num(nyquist_floor)});
    return out;
}

void require_synthesizable(const TransmitterConfig& cfg, double sample_rate_hz) {
    const auto v = transmitter_violations(cfg, sample_rate_hz);
    if (v.empty()) return;
    std::string msg = "invalid transmitter configuration:";
    for (const auto& x : v) msg += "\n  " + to_string(x);
    throw ConfigError(msg);
}

BitStream generate_bits(std::uint64_t seed, std::size_t n) {
    BitStream s;
    s.seed = seed;
    s.bits.resize(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        s.bits[i] = static_cast<std::uint8_t>(splitmix64_at(seed, static_cast<std::uint64_t>(i)) >> 63);
    return s;
}

BitStream map_bits_to_iq(BitStream stream) {
    const std::size_t n = stream.bits.size();
    const std::size_t half = (n + 1) / 2;
    stream.i_bits.assign(half, +1);
    stream.q_bits.assign(half, +1);
    for (std::size_t k = 0; k < n; ++k) {
        const int symbol = 1 - 2 * static_cast<int>(stream.bits[k]);
        (k % 2 == 0 ? stream.i_bits : stream.q_bits)[k / 2] = symbol;
    }
    return stream;
}

BitStream differential_precode(const BitStream& payload, int initial_inphase_bit) {
    BitStream c;
    c.seed = payload.seed;
    c.bits.resize(payload.bits.size() + 1);
    c.bits[0] = initial_inphase_bit > 0 ? 0 : 1;
    for (std::size_t k = 0; k < payload.bits.size(); ++k)
        c.bits[k + 1] = static_cast<std::uint8_t>(c.bits[k] ^ payload.bits[k]);
    return c;
}

std::size_t sample_count(double sample_rate_hz, double duration_s) {
    if (!(duration_s >= 0.0) || !std::isfinite(duration_s))
        throw DomainError("duration_s must be finite and >= 0");
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

std::size_t first_sample_of_bit(std::size_t k, double sample_rate_hz, double data_rate_bps) {
    const long double n = static_cast<long double>(k) * static_cast<long double>(sample_rate_hz) /
                          static_cast<long double>(data_rate_bps);
    return static_cast<std::size_t>(std::ceil(n));
}

std::size_t bits_required(std::size_t n_samples, double sample_rate_hz, double data_rate_bps) {
    if (n_samples == 0) return 0;
    // Largest k with first_sample_of_bit(k) <= n_samples - 1, plus one.
    const long double last = static_cast<long double>(n_samples - 1);
    auto k = static_cast<std::size_t>(std::floor(last * static_cast<long double>(data_rate_bps) /
                                                 static_cast<long double>(sample_rate_hz)));
    while (first_sample_of_bit(k + 1, sample_rate_hz, data_rate_bps) <= n_samples - 1) ++k;
    while (k > 0 && first_sample_of_bit(k, sample_rate_hz, data_rate_bps) > n_samples - 1) --k;
    return k + 1;
}

SignalBuffer msk_modulate(const BitStream& bits, const TransmitterConfig& cfg,
                          double sample_rate_hz, double duration_s) {
    require_synthesizable(cfg, sample_rate_hz);
    const std::size_t n = sample_count(sample_rate_hz, duration_s);
    const std::size_t nbits = bits_required(n, sample_rate_hz, cfg.data_rate_bps);
    if (nbits > bits.bits.size())
        throw UnderrunError("msk_modulate: " + std::to_string(duration_s) + " s at " +
                            std::to_string(cfg.data_rate_bps) + " bps needs " +
                            std::to_string(nbits) + " bits, stream has " +
                            std::to_string(bits.bits.size()));

    // Bit-level phase anchors: the phase at t = kT, accumulated over whole bits.
    std::vector<long double> anchor(nbits);
    long double c = detail::initial_cycles(cfg);
    const long double period = 1.0L / static_cast<long double>(cfg.data_rate_bps);
    for (std::size_t k = 0; k < nbits; ++k) {
        anchor[k] = c;
        c = detail::wrap_cycles(c + detail::keyed_freq(cfg, bits.bits[k]) * period);
    }

    std::vector<double> out(n);
    const double amp = cfg.amp_msk;
    const long double inv_fs = 1.0L / static_cast<long double>(sample_rate_hz);
    const auto count = static_cast<std::ptrdiff_t>(nbits);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < count; ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        const std::size_t lo = first_sample_of_bit(k, sample_rate_hz, cfg.data_rate_bps);
        const std::size_t hi =
            std::min(n, first_sample_of_bit(k + 1, sample_rate_hz, cfg.data_rate_bps));
        const long double f = detail::keyed_freq(cfg, bits.bits[k]);
        const long double step = f * inv_fs;
        long double phase = detail::wrap_cycles(
            anchor[k] + f * (detail::sample_time(lo, sample_rate_hz) -
                             detail::bit_start_time(k, cfg.data_rate_bps)));
        for (std::size_t i = lo; i < hi; ++i) {
            out[i] = amp * std::cos(detail::cycles_to_rad(phase));
            phase += step;
            if (phase >= 1.0L) phase -= 1.0L;
        }
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
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const long double cyc =
            detail::wrap_cycles(f * detail::sample_time(static_cast<std::size_t>(i), sample_rate_hz));
        out[i] = amp * std::sin(detail::cycles_to_rad(cyc) + phi);
    }
    return SignalBuffer(std::move(out), sample_rate_hz, 0.0);
}

SignalBuffer compose_transmit(const SignalBuffer& msk, const SignalBuffer& cw1,
                              const SignalBuffer& cw2) {
    return add_signals(add_signals(msk, cw1), cw2);
}

}  // namespace rmode
