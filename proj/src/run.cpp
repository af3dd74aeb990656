#include "rmode/run.hpp"

#include "rmode/analysis.hpp"
#include "rmode/sample_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rmode {

using nlohmann::json;

namespace {

double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

Distortion measure(const SignalBuffer& ground, const SignalBuffer& received, double f, SampleRange w) {
    const ToneEstimate g = estimate_tone(ground, f, w);
    const ToneEstimate r = estimate_tone(received, f, w);
    return {r.amplitude / g.amplitude, wrap_pi(r.phase_rad - g.phase_rad)};
}

json distortion_json(const Distortion& d) { return {{"eta", d.eta}, {"beta_rad", d.beta_rad}}; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Simulation simulate(const ScenarioConfig& cfg) {
    const auto violations = validate_scenario(cfg);
    if (!violations.empty()) {
        std::string msg = std::to_string(violations.size()) + " violation(s)";
        for (const auto& v : violations) msg += "\n  " + to_string(v);
        throw ValidationError(violations.front().field, msg);
    }

    const SkywaveParams sky = resolved_skywave(cfg);
    const auto& tx = cfg.transmitter;
    const double fs = cfg.sample_rate_hz;
    const std::size_t n = sample_count(fs, cfg.duration_s);

    BitStream bits = generate_bits(cfg.bits_seed, bits_required(n, fs, tx.data_rate_bps));
    SignalBuffer msk = msk_modulate(bits, tx, fs, cfg.duration_s);
    SignalBuffer cw1 = generate_cw(tx, CwTone::lower, fs, cfg.duration_s);
    SignalBuffer cw2 = generate_cw(tx, CwTone::upper, fs, cfg.duration_s);
    SignalBuffer ground = compose_transmit(msk, cw1, cw2);

    SkywaveResult prop = apply_skywave(ground, sky);
    SignalBuffer received =
        add_awgn(prop.received, cfg.noise, cfg.noise.enabled() ? std::optional(mean_square(ground)) : std::nullopt);

    return Simulation{cfg,
                      sky,
                      std::move(bits),
                      std::move(msk),
                      std::move(cw1),
                      std::move(cw2),
                      std::move(ground),
                      std::move(prop.skywave),
                      std::move(prop.received),
                      std::move(received),
                      prop.delay_s,
                      prop.integer_shift,
                      prop.fraction,
                      prop.valid};
}

RunReport verify(const Simulation& sim) {
    const auto& cfg = sim.config;
    const auto& tx = cfg.transmitter;
    RunReport rep;
    rep.scenario = cfg.name;
    rep.skywave_delay_s = sim.delay_s;
    rep.skywave_delay_samples = sim.delay_s * cfg.sample_rate_hz;
    rep.ground_distance_m = sim.skywave.ground_distance_m;
    rep.ionosphere_height_m = sim.skywave.ionosphere_height_m;
    rep.attenuation_alpha = sim.skywave.attenuation_alpha;

    const double alpha = sim.skywave.attenuation_alpha;
    const SampleRange w = sim.delay_valid;

    for (const CwTone which : {CwTone::lower, CwTone::upper}) {
        ToneCheck t;
        t.tone = which == CwTone::lower ? "cw1" : "cw2";
        t.freq_hz = cw_freq_hz(tx, which);
        const double omega = 2.0 * std::numbers::pi * t.freq_hz;
        t.omega_td_rad = omega * sim.delay_s;
        t.closed_form = eta_beta_closed_form(alpha, omega, sim.delay_s);
        t.as_printed = eta_beta_as_printed(alpha, omega, sim.delay_s);

        const SignalBuffer& tone = which == CwTone::lower ? sim.cw1 : sim.cw2;
        const double amp = which == CwTone::lower ? tx.amp_cw1 : tx.amp_cw2;
        if (amp > 0.0) {
            const SkywaveResult iso = superpose_delayed(tone, sim.delay_s, alpha);
            t.measured = measure(tone, iso.received, t.freq_hz, w);
            t.composite_measured = measure(sim.groundwave, sim.received_clean, t.freq_hz, w);

            t.eta_error = std::abs(t.measured->eta - t.closed_form.eta);
            t.beta_error_rad = std::abs(wrap_pi(t.measured->beta_rad - t.closed_form.beta_rad));
            const bool near_null = t.closed_form.eta < tolerance::eta_null_threshold;
            const double eta_tol = near_null ? tolerance::eta_absolute_near_null
                                             : tolerance::eta_relative * t.closed_form.eta;
            t.within_tolerance = t.eta_error <= eta_tol && t.beta_error_rad <= tolerance::beta_rad;
            if (!t.within_tolerance)
                rep.breaches.push_back(t.tone + ": measured (eta, beta) deviates from the closed form");
        }
        rep.tones.push_back(t);
    }

    const SampleRange hv = hilbert_valid_range(sim.msk.size());
    if (tx.amp_msk > 0.0) {
        const SignalBuffer env = analytic_envelope(sim.msk);
        double worst = 0.0;
        for (std::size_t i = hv.begin; i < hv.end; ++i)
            worst = std::max(worst, std::abs(env[i] - tx.amp_msk) / tx.amp_msk);
        rep.msk_envelope_max_rel_deviation = worst;
        if (worst >= tolerance::msk_envelope_relative)
            rep.breaches.push_back("MSK envelope deviates from a constant amplitude");
    }
    {
        const SignalBuffer env = analytic_envelope(sim.groundwave);
        const auto span = env.samples().subspan(hv.begin, hv.size());
        const auto [lo, hi] = std::minmax_element(span.begin(), span.end());
        rep.composite_envelope_min = *lo;
        rep.composite_envelope_max = *hi;
    }

    if (cfg.noise.enabled()) {
        rep.configured_snr_db = cfg.noise.snr_db;
        const SignalBuffer noise = subtract_signals(sim.received, sim.received_clean);
        rep.measured_snr_db = 10.0 * std::log10(mean_square(sim.groundwave) / mean_square(noise));
        if (std::abs(*rep.measured_snr_db - cfg.noise.snr_db) > tolerance::snr_db)
            rep.breaches.push_back("measured SNR is outside the configured value +/- 0.5 dB");
    }
    return rep;
}

json RunReport::to_json() const {
    json tones_j = json::array();
    for (const auto& t : tones) {
        tones_j.push_back({
            {"tone", t.tone},
            {"freq_hz", t.freq_hz},
            {"omega_td_rad", t.omega_td_rad},
            {"closed_form", distortion_json(t.closed_form)},
            {"as_printed", distortion_json(t.as_printed)},
            {"measured", t.measured ? distortion_json(*t.measured) : json(nullptr)},
            {"composite_measured", t.composite_measured ? distortion_json(*t.composite_measured) : json(nullptr)},
            {"eta_error", t.eta_error},
            {"beta_error_rad", t.beta_error_rad},
            {"within_tolerance", t.within_tolerance},
        });
    }
    return {
        {"scenario", scenario},
        {"skywave",
         {{"delay_s", skywave_delay_s},
          {"delay_samples", skywave_delay_samples},
          {"ground_distance_m", ground_distance_m},
          {"ionosphere_height_m", ionosphere_height_m},
          {"attenuation_alpha", attenuation_alpha}}},
        {"cw_tones", tones_j},
        {"envelope",
         {{"msk_max_rel_deviation", optional_json(msk_envelope_max_rel_deviation)},
          {"composite_min", composite_envelope_min},
          {"composite_max", composite_envelope_max}}},
        {"snr", {{"configured_db", optional_json(configured_snr_db)}, {"measured_db", optional_json(measured_snr_db)}}},
        {"tolerances",
         {{"eta_relative", tolerance::eta_relative},
          {"eta_absolute_near_null", tolerance::eta_absolute_near_null},
          {"eta_null_threshold", tolerance::eta_null_threshold},
          {"beta_rad", tolerance::beta_rad},
          {"msk_envelope_relative", tolerance::msk_envelope_relative},
          {"snr_db", tolerance::snr_db}}},
        {"breaches", breaches},
        {"passed", passed()},
    };
}

SampleRange plot_rows(const ScenarioConfig& cfg, std::size_t n) {
    const auto lo = static_cast<std::size_t>(std::llround(cfg.plot_window.start_s * cfg.sample_rate_hz));
    const auto hi = static_cast<std::size_t>(std::llround(cfg.plot_window.end_s * cfg.sample_rate_hz));
    return {std::min(lo, n), std::min(hi, n)};
}

json run_metadata(const Simulation& sim) {
    const auto& cfg = sim.config;
    using K = FractionalDelayKernel;
    return {
        {"tool", tool_name},
        {"version", tool_version},
        {"sample_format", "float32le"},
        {"sample_rate_hz", cfg.sample_rate_hz},
        {"start_time_s", sim.groundwave.start_time()},
        {"samples", sim.groundwave.size()},
        {"bits", sim.bits.bits.size()},
        {"seeds", {{"bits", cfg.bits_seed}, {"noise", cfg.noise.seed}}},
        {"prng", "splitmix64; bits = MSB of each output; noise = Box-Muller over output pairs"},
        {"fractional_delay",
         {{"method", "windowed-sinc FIR"},
          {"window", "kaiser"},
          {"kaiser_beta", K::kaiser_beta},
          {"taps", K::taps},
          {"edge_exclusion_samples", K::edge_exclusion},
          {"delay_s", sim.delay_s},
          {"integer_shift", sim.integer_shift},
          {"fraction", sim.fraction},
          {"valid_begin", sim.delay_valid.begin},
          {"valid_end", sim.delay_valid.end}}},
        {"analytic_signal",
         {{"method", "zero-padded FFT, one-sided mask with raised-cosine roll-off at DC and Nyquist"},
          {"edge_exclusion_samples", hilbert_edge_samples},
          {"padding_samples", hilbert_padding_samples},
          {"taper_fraction_of_fs", hilbert_taper_fraction}}},
        {"resolved_skywave",
         {{"ionosphere_height_m", sim.skywave.ionosphere_height_m},
          {"ground_distance_m", sim.skywave.ground_distance_m},
          {"attenuation_alpha", sim.skywave.attenuation_alpha}}},
        {"traces_csv", {{"noise", false}, {"rows", plot_rows(cfg, sim.groundwave.size()).size()}}},
        {"scenario", scenario_to_json(cfg)},
    };
}

RunOutputs write_outputs(const Simulation& sim, const RunReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create output directory: " + ec.message());

    RunOutputs out{dir, {}};
    const auto fmt = sim.config.outputs.format;
    const std::pair<const char*, const SignalBuffer*> streams[] = {
        {"groundwave", &sim.groundwave}, {"skywave", &sim.skywave_signal}, {"received", &sim.received}};
    for (const auto& [stem, buf] : streams) {
        if (fmt == SampleFormat::raw || fmt == SampleFormat::both) {
            out.files.push_back(dir / (std::string(stem) + ".f32"));
            write_raw_f32(out.files.back(), *buf);
        }
        if (fmt == SampleFormat::wav || fmt == SampleFormat::both) {
            out.files.push_back(dir / (std::string(stem) + ".wav"));
            write_wav_f32(out.files.back(), *buf);
        }
    }

    out.files.push_back(dir / "traces.csv");
    write_trace_csv(out.files.back(), sim.groundwave, sim.skywave_signal, sim.received_clean,
                    plot_rows(sim.config, sim.groundwave.size()));
    out.files.push_back(dir / "metadata.json");
    write_text_file(out.files.back(), run_metadata(sim).dump(2) + "\n");
    out.files.push_back(dir / "report.json");
    write_text_file(out.files.back(), report.to_json().dump(2) + "\n");
    return out;
}

RunReport run_scenario(const ScenarioConfig& cfg) {
    const Simulation sim = simulate(cfg);
    RunReport report = verify(sim);
    write_outputs(sim, report, cfg.outputs.dir);
    return report;
}

}  // namespace rmode
