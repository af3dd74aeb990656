// run.hpp - end-to-end scenario pipeline and verification report
//
//   bits -> MSK -> + CW tones -> skywave -> AWGN -> files + report
#pragma once

#include "rmode/channel.hpp"
#include "rmode/scenario.hpp"
#include "rmode/tx.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rmode {

inline constexpr const char* tool_name = "rmode_sim";
inline constexpr const char* tool_version = "1.0.0";

// Report gates.
namespace tolerance {
inline constexpr double eta_relative = 1e-3;
inline constexpr double eta_absolute_near_null = 1e-3;
inline constexpr double eta_null_threshold = 0.05;
inline constexpr double beta_rad = 1e-3;
inline constexpr double msk_envelope_relative = 1e-3;
inline constexpr double snr_db = 0.5;
}  // namespace tolerance

// Every intermediate waveform of one run, all sharing rate, start time and length.
struct Simulation {
    ScenarioConfig config;
    SkywaveParams skywave;  // resolved
    BitStream bits;
    SignalBuffer msk;
    SignalBuffer cw1;
    SignalBuffer cw2;
    SignalBuffer groundwave;
    SignalBuffer skywave_signal;
    SignalBuffer received_clean;  // groundwave + skywave
    SignalBuffer received;        // with AWGN when enabled
    double delay_s = 0.0;
    std::size_t integer_shift = 0;
    double fraction = 0.0;
    SampleRange delay_valid;
};

// Validates, then synthesizes in memory. Throws ValidationError listing violations.
Simulation simulate(const ScenarioConfig& cfg);

struct ToneCheck {
    std::string tone;  // "cw1" / "cw2"
    double freq_hz = 0.0;
    double omega_td_rad = 0.0;
    Distortion closed_form;
    Distortion as_printed;
    std::optional<Distortion> measured;            // isolated tone through the channel
    std::optional<Distortion> composite_measured;  // fitted inside the composite (informational)
    double eta_error = 0.0;
    double beta_error_rad = 0.0;
    bool within_tolerance = true;
};

struct RunReport {
    std::string scenario;
    double skywave_delay_s = 0.0;
    double skywave_delay_samples = 0.0;
    double ground_distance_m = 0.0;
    double ionosphere_height_m = 0.0;
    double attenuation_alpha = 0.0;
    std::vector<ToneCheck> tones;
    std::optional<double> msk_envelope_max_rel_deviation;
    double composite_envelope_min = 0.0;
    double composite_envelope_max = 0.0;
    std::optional<double> configured_snr_db;
    std::optional<double> measured_snr_db;
    std::vector<std::string> breaches;

    bool passed() const noexcept { return breaches.empty(); }
    nlohmann::json to_json() const;
};

RunReport verify(const Simulation& sim);

struct RunOutputs {
    std::filesystem::path dir;
    std::vector<std::filesystem::path> files;
};

// Writes sample files, traces.csv, metadata.json and report.json under dir.
RunOutputs write_outputs(const Simulation& sim, const RunReport& report, const std::filesystem::path& dir);

nlohmann::json run_metadata(const Simulation& sim);

// simulate + verify + write_outputs into cfg.outputs.dir.
RunReport run_scenario(const ScenarioConfig& cfg);

// Plot window as sample rows.
SampleRange plot_rows(const ScenarioConfig& cfg, std::size_t n);

}  // namespace rmode
