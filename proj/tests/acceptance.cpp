// acceptance.cpp - end-to-end acceptance gate, one line per criterion
//
// usage: acceptance <scenario.json>
// The scenario supplies the default transmitter, geometry and seeds.
#include "oracles.hpp"
#include "rmode/analysis.hpp"
#include "rmode/channel.hpp"
#include "rmode/run.hpp"
#include "rmode/sample_io.hpp"
#include "rmode/scenario.hpp"
#include "rmode/tx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace rmode;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

char buf[1024];

template <typename... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

SignalBuffer tone(double f, double duration, double fs) {
    const auto n = sample_count(fs, duration);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double cyc = std::fmod(static_cast<long double>(f) * i / fs, 1.0L);
        v[i] = std::sin(2.0 * pi * static_cast<double>(cyc));
    }
    return SignalBuffer(std::move(v), fs);
}

// 1. Single-hop delay against the extended-precision value, and its cost.
Outcome delay_oracle(const ScenarioConfig& c) {
    SkywaveParams p = c.skywave;
    p.ionosphere_height_m = 90'000.0;
    p.ground_distance_m = 210'000.0;
    const auto t0 = clock_type::now();
    const double td = skywave_delay(p);
    const double dt = seconds_since(t0);
    const long double err = std::abs(static_cast<long double>(td) - oracle::td_90km_210km);
    return {err <= 1e-12L && dt < 1e-3,
            fmt("t_d = %.15e s, |error| = %.2Le s (tol 1e-12), runtime %.3g ms (limit 1 ms)", td, err, dt * 1e3)};
}

// 2. Waveform superposition of a pure tone vs the phasor closed form.
Outcome eta_beta_grid(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const double f = c.transmitter.carrier_freq_hz;
    const double omega = 2.0 * pi * f;
    std::vector<double> angles;
    for (int k = 0; k < 24; ++k) angles.push_back(2.0 * pi * k / 23.0);
    for (int k = 0; k <= 12; ++k) angles.push_back(pi * k / 6.0);

    const auto t0 = clock_type::now();
    const SignalBuffer g = tone(f, 0.1, fs);
    std::size_t cases = 0, failures = 0;
    double worst_eta = 0.0, worst_beta = 0.0;
    for (double alpha : {0.1, 0.3, 0.5, 0.8}) {
        for (double theta : angles) {
            const double td = theta / omega;
            const SkywaveResult r = superpose_delayed(g, td, alpha);
            const ToneEstimate a = estimate_tone(g, f, r.valid);
            const ToneEstimate b = estimate_tone(r.received, f, r.valid);
            const double eta = b.amplitude / a.amplitude;
            const double beta = std::remainder(b.phase_rad - a.phase_rad, 2.0 * pi);
            const Distortion cf = eta_beta_closed_form(alpha, omega, td);
            const double eta_err = cf.eta < 0.05 ? std::abs(eta - cf.eta) : std::abs(eta - cf.eta) / cf.eta;
            const double beta_err = std::abs(std::remainder(beta - cf.beta_rad, 2.0 * pi));
            worst_eta = std::max(worst_eta, eta_err);
            worst_beta = std::max(worst_beta, beta_err);
            ++cases;
            if (!(eta_err <= 1e-3 && beta_err <= 1e-3)) ++failures;
        }
    }
    const double dt = seconds_since(t0);
    return {failures == 0 && dt < 30.0,
            fmt("%zu cases (4 alpha x 24 evenly spaced on [0, 2pi] + 13 multiples of pi/6), "
                "worst eta error %.2e, worst beta error %.2e rad (tol 1e-3), runtime %.2f s (limit 30 s)",
                cases, worst_eta, worst_beta, dt)};
}

// 3. MSK-only envelope over 1 s.
Outcome msk_envelope(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const std::size_t n = sample_count(fs, 1.0);
    const BitStream bits = generate_bits(c.bits_seed, bits_required(n, fs, c.transmitter.data_rate_bps));
    const SignalBuffer x = msk_modulate(bits, c.transmitter, fs, 1.0);
    const SignalBuffer e = analytic_envelope(x);
    const SampleRange r = hilbert_valid_range(e.size());
    double worst = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i)
        worst = std::max(worst, std::abs(e[i] - c.transmitter.amp_msk) / c.transmitter.amp_msk);
    return {worst < 1e-3, fmt("max relative deviation %.3e over samples [%zu, %zu) (tol 1e-3)", worst, r.begin, r.end)};
}

// 4. Per-bit tone fits on a 100-bit run.
Outcome frequency_keying(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const TransmitterConfig& tx = c.transmitter;
    const BitStream bits = generate_bits(c.bits_seed, 100);
    const SignalBuffer x = msk_modulate(bits, tx, fs, 100.0 / tx.data_rate_bps);
    double worst = 0.0;
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < 100; ++k) {
        // Samples strictly inside the bit interval.
        const std::size_t first = first_sample_of_bit(k, fs, tx.data_rate_bps) + 1;
        const std::size_t last = std::min(first_sample_of_bit(k + 1, fs, tx.data_rate_bps), x.size()) - 1;
        const ToneEstimate t = estimate_tone_frequency(x, tx.carrier_freq_hz - tx.data_rate_bps,
                                                       tx.carrier_freq_hz + tx.data_rate_bps, {first, last});
        const double expected = bits.bits[k] ? tx.mark_freq_hz() : tx.space_freq_hz();
        const double other = bits.bits[k] ? tx.space_freq_hz() : tx.mark_freq_hz();
        const double err = std::abs(t.freq_hz - expected);
        worst = std::max(worst, err);
        if (!(err < 0.1) || std::abs(t.freq_hz - other) < err) ++mismatched;
    }
    return {mismatched == 0, fmt("100 bits, worst |f_fit - f_bit| = %.2e Hz (tol 0.1 Hz), %zu mismatched", worst, mismatched)};
}

// 5. Per-sample phase increments of the analytic signal on a 1000-bit run.
Outcome phase_continuity(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const TransmitterConfig& tx = c.transmitter;
    const BitStream bits = generate_bits(c.bits_seed, 1000);
    const SignalBuffer x = msk_modulate(bits, tx, fs, 1000.0 / tx.data_rate_bps);
    const SignalBuffer ph = instantaneous_phase(x);
    const SampleRange r = hilbert_valid_range(ph.size());
    const double step = 2.0 * pi * tx.mark_freq_hz() / fs;
    const double bound = step + 1e-6;
    const double samples_per_bit = fs / tx.data_rate_bps;

    double worst = -1e300, worst_interior = -1e300;
    std::size_t at = 0;
    for (std::size_t i = r.begin + 1; i < r.end; ++i) {
        const double d = ph[i] - ph[i - 1];
        if (d > worst) {
            worst = d;
            at = i;
        }
        // Increments well away from every bit boundary.
        const double offset = std::fmod(static_cast<double>(i), samples_per_bit);
        if (offset > 2000.0 && offset < samples_per_bit - 2000.0) worst_interior = std::max(worst_interior, d);
    }
    const double offset = std::fmod(static_cast<double>(at), samples_per_bit);
    const double to_boundary = std::min(offset, samples_per_bit - offset);
    return {worst <= bound,
            fmt("max increment exceeds 2 pi f1/fs by %.3e rad (tol 1e-6) at sample %zu, %.0f samples from a bit "
                "boundary; >2000 samples from any boundary the excess is %.3e rad",
                worst - step, at, to_boundary, worst_interior - step)};
}

// 6. CW lines in the Welch spectrum of a 10 s composite.
Outcome cw_lines(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const TransmitterConfig& tx = c.transmitter;
    const double duration = 10.0;
    const std::size_t n = sample_count(fs, duration);
    const BitStream bits = generate_bits(c.bits_seed, bits_required(n, fs, tx.data_rate_bps));
    const SignalBuffer msk = msk_modulate(bits, tx, fs, duration);
    const std::size_t seg = 65536;
    const auto msk_psd = power_spectrum(msk, seg);
    const SignalBuffer composite =
        compose_transmit(msk, generate_cw(tx, CwTone::lower, fs, duration), generate_cw(tx, CwTone::upper, fs, duration));
    const auto psd = power_spectrum(composite, seg);
    const double df = fs / static_cast<double>(seg);

    bool ok = true;
    std::string detail = fmt("segment %zu (bin %.2f Hz):", seg, df);
    for (CwTone t : {CwTone::lower, CwTone::upper}) {
        const double f = cw_freq_hz(tx, t);
        const auto k = static_cast<std::size_t>(std::llround(f / df));
        const bool local_max = psd[k].power_db > psd[k - 1].power_db && psd[k].power_db > psd[k + 1].power_db;
        const double margin = psd[k].power_db - std::max(msk_psd[k - 1].power_db, msk_psd[k + 1].power_db);
        ok = ok && local_max && margin >= 10.0 && std::abs(psd[k].freq_hz - f) < 1e-6;
        detail += fmt(" %.0f Hz local max %s, %.1f dB above adjacent MSK-only bins (need 10);", psd[k].freq_hz,
                      local_max ? "yes" : "no", margin);
    }
    detail.pop_back();
    return {ok, detail};
}

// 7. AWGN calibration and whiteness over 1e6 samples.
Outcome noise_calibration(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const TransmitterConfig& tx = c.transmitter;
    const std::size_t n = 1'000'000;
    const double duration = static_cast<double>(n) / fs;
    const BitStream bits = generate_bits(c.bits_seed, bits_required(n, fs, tx.data_rate_bps));
    const SignalBuffer s = compose_transmit(msk_modulate(bits, tx, fs, duration),
                                            generate_cw(tx, CwTone::lower, fs, duration),
                                            generate_cw(tx, CwTone::upper, fs, duration));
    bool ok = s.size() == n;
    std::string detail;
    for (double snr : {20.0, 0.0}) {
        const SignalBuffer y = add_awgn(s, NoiseParams{snr, c.noise.seed});
        const double measured = estimate_snr(s, y);
        const SignalBuffer w = subtract_signals(y, s);
        const double p = mean_square(w);
        double worst_lag = 0.0;
        for (std::size_t lag = 1; lag <= 10; ++lag) {
            double acc = 0.0;
            for (std::size_t i = lag; i < n; ++i) acc += w[i] * w[i - lag];
            worst_lag = std::max(worst_lag, std::abs(acc / static_cast<double>(n) / p));
        }
        ok = ok && std::abs(measured - snr) <= 0.5 && worst_lag < 0.01;
        detail += fmt("%g dB -> %.3f dB (tol 0.5), max |autocorr lag 1..10| %.2e (tol 0.01); ", snr, measured, worst_lag);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

std::vector<std::string> run_files(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "metadata.json") names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

// 8. Two default runs, byte for byte.
Outcome determinism(const ScenarioConfig& c, const fs::path& a, const fs::path& b) {
    ScenarioConfig ca = c, cb = c;
    ca.outputs.dir = a.string();
    cb.outputs.dir = b.string();
    (void)run_scenario(ca);
    (void)run_scenario(cb);
    const auto names = run_files(a);
    bool ok = names == run_files(b) && !names.empty();
    std::size_t differing = 0;
    for (const auto& f : names)
        if (read_text_file(a / f) != read_text_file(b / f)) ++differing;
    ok = ok && differing == 0;
    std::string list;
    for (const auto& f : names) list += f + " ";
    list.pop_back();
    return {ok, fmt("%zu files compared (%s), %zu differ", names.size(), list.c_str(), differing)};
}

// 9. CSV traces: received = groundwave + skywave.
Outcome trace_identity(const ScenarioConfig& c, const fs::path& dir) {
    const auto rows = read_trace_csv(dir / "traces.csv");
    const SampleRange want = plot_rows(c, sample_count(c.sample_rate_hz, c.duration_s));
    double worst = 0.0;
    for (const TraceRow& r : rows) worst = std::max(worst, std::abs(r.received - (r.groundwave + r.skywave)));
    const double span = rows.empty() ? 0.0 : rows.back().time_s - rows.front().time_s + 1.0 / c.sample_rate_hz;
    const bool ok = rows.size() == want.size() && std::abs(span - 0.020) < 1e-9 && worst <= 1e-12;
    return {ok, fmt("%zu rows spanning %.6f s, max |received - (ground + sky)| = %.2e (tol 1e-12)", rows.size(), span, worst)};
}

// 10. Phase-accumulation synthesis vs the direct quadrature form.
Outcome synthesis_equivalence(const ScenarioConfig& c) {
    const double fs = c.sample_rate_hz;
    const TransmitterConfig& tx = c.transmitter;
    const BitStream bits = generate_bits(c.bits_seed, 100);
    const SignalBuffer x = msk_modulate(bits, tx, fs, 100.0 / tx.data_rate_bps);
    const BitStream iq = map_bits_to_iq(differential_precode(bits, tx.initial_inphase_bit));
    const std::vector<double> d = oracle::msk_direct(iq, tx, fs, x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - d[i]));
    return {worst <= 1e-9, fmt("%zu samples, max |difference| = %.2e (tol 1e-9)", x.size(), worst)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <scenario.json>\n", argv[0]);
        return 2;
    }
    ScenarioConfig cfg;
    try {
        cfg = load_scenario(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot load scenario: %s\n", e.what());
        return 2;
    }

    const fs::path work = fs::temp_directory_path() / "rmode_acceptance";
    fs::remove_all(work);
    const fs::path run_a = work / "a", run_b = work / "b";

    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {"skywave delay oracle", [&] { return delay_oracle(cfg); }},
        {"eta/beta closed form vs waveform", [&] { return eta_beta_grid(cfg); }},
        {"MSK constant envelope", [&] { return msk_envelope(cfg); }},
        {"MSK frequency keying", [&] { return frequency_keying(cfg); }},
        {"MSK phase continuity", [&] { return phase_continuity(cfg); }},
        {"CW line placement", [&] { return cw_lines(cfg); }},
        {"AWGN calibration", [&] { return noise_calibration(cfg); }},
        {"run determinism", [&] { return determinism(cfg, run_a, run_b); }},
        {"trace superposition", [&] { return trace_identity(cfg, run_a); }},
        {"synthesis equivalence", [&] { return synthesis_equivalence(cfg); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = clock_type::now();
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %-34s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    fs::remove_all(work);
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
