// scenario.hpp - scenario description, JSON schema and validation
#pragma once

#include "rmode/channel.hpp"
#include "rmode/errors.hpp"
#include "rmode/tx.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rmode {

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

// Attenuation taken from an AlphaTable file instead of a literal alpha.
struct AlphaTableRef {
    std::string path;  // resolved against the scenario file's directory
    DayPeriod period = DayPeriod::night;
};

struct PlotWindow {
    double start_s = 0.5;
    double end_s = 0.52;
};

enum class SampleFormat { raw, wav, both };

std::string to_string(SampleFormat f);
SampleFormat parse_sample_format(const std::string& s);

struct OutputConfig {
    std::string dir = "out";
    SampleFormat format = SampleFormat::raw;
};

struct ScenarioConfig {
    std::string name = "scenario";
    TransmitterConfig transmitter;
    SkywaveParams skywave;
    // When both are set they replace skywave.ground_distance_m.
    std::optional<GeoPoint> transmitter_position;
    std::optional<GeoPoint> receiver_position;
    // When set it replaces skywave.attenuation_alpha.
    std::optional<AlphaTableRef> alpha_table;
    NoiseParams noise;
    std::uint64_t bits_seed = 1;
    double sample_rate_hz = default_sample_rate_hz;
    double duration_s = 1.0;
    PlotWindow plot_window;
    OutputConfig outputs;
};

// Geomundo Island MF DGNSS station: 150 kW, 287 kHz, 100 bps; receiver at 210 km,
// reflection height 90 km. alpha = 0.3 is illustrative, not a measured value.
ScenarioConfig default_scenario();

// Strict parse: unknown keys and wrong types throw ValidationError naming the
// field. Missing keys keep the defaults of ScenarioConfig{}. Relative file
// paths are resolved against base_dir.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

// Throws IoError if unreadable, ValidationError on malformed JSON or schema errors.
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Empty iff every invariant holds.
std::vector<Violation> validate_scenario(const ScenarioConfig& cfg);

// Skywave parameters with distance and alpha resolved from positions / table.
SkywaveParams resolved_skywave(const ScenarioConfig& cfg);

}  // namespace rmode
