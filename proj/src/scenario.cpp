#include "rmode/scenario.hpp"

#include "rmode/analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace rmode {

using nlohmann::json;

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Walks one JSON object, rejecting keys that were never read.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) throw ValidationError(field(key), "expected a number");
            out = v->get<double>();
        }
    }

    void integer(const std::string& key, int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) throw ValidationError(field(key), "expected an integer");
            out = v->get<int>();
        }
    }

    void seed(const std::string& key, std::uint64_t& out) {
        if (const json* v = get(key)) {
            if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
            else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) out = v->get<std::uint64_t>();
            else throw ValidationError(field(key), "expected a non-negative integer seed");
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) throw ValidationError(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) throw ValidationError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw ValidationError(field(key), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

GeoPoint read_point(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    GeoPoint p;
    if (!r.has("lat_deg")) throw ValidationError(r.field("lat_deg"), "required");
    if (!r.has("lon_deg")) throw ValidationError(r.field("lon_deg"), "required");
    r.number("lat_deg", p.lat_deg);
    r.number("lon_deg", p.lon_deg);
    r.finish();
    return p;
}

json point_json(const GeoPoint& p) { return {{"lat_deg", p.lat_deg}, {"lon_deg", p.lon_deg}}; }

}  // namespace

std::string to_string(SampleFormat f) {
    switch (f) {
        case SampleFormat::raw: return "raw";
        case SampleFormat::wav: return "wav";
        case SampleFormat::both: return "both";
    }
    return "raw";
}

SampleFormat parse_sample_format(const std::string& s) {
    if (s == "raw") return SampleFormat::raw;
    if (s == "wav") return SampleFormat::wav;
    if (s == "both") return SampleFormat::both;
    throw DomainError("sample format must be raw, wav or both, got '" + s + "'");
}

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.name = "geomundo";
    c.transmitter = TransmitterConfig{};
    c.skywave = SkywaveParams{90'000.0, 210'000.0, 0.3};
    c.noise = NoiseParams{20.0, 2};
    c.bits_seed = 1;
    c.sample_rate_hz = default_sample_rate_hz;
    c.duration_s = 1.0;
    c.plot_window = PlotWindow{0.5, 0.52};
    c.outputs = OutputConfig{"out/geomundo", SampleFormat::raw};
    return c;
}

ScenarioConfig scenario_from_json(const json& j, const std::string& base_dir) {
    ScenarioConfig c;
    ObjectReader root(j, "");
    root.string("name", c.name);

    if (const json* t = root.get("transmitter")) {
        ObjectReader r(*t, "transmitter");
        auto& tx = c.transmitter;
        r.number("carrier_freq_hz", tx.carrier_freq_hz);
        r.number("data_rate_bps", tx.data_rate_bps);
        r.number("amp_msk", tx.amp_msk);
        // Tone amplitudes default to the 50/25/25 power split of the MSK amplitude.
        tx.amp_cw1 = tx.amp_cw2 = tx.amp_msk / std::sqrt(2.0);
        r.number("amp_cw1", tx.amp_cw1);
        r.number("amp_cw2", tx.amp_cw2);
        r.number("phase_cw1_rad", tx.phase_cw1_rad);
        r.number("phase_cw2_rad", tx.phase_cw2_rad);
        r.integer("initial_inphase_bit", tx.initial_inphase_bit);
        r.number("nominal_tx_power_w", tx.nominal_tx_power_w);
        r.boolean("allow_nonstandard", tx.allow_nonstandard);
        r.finish();
    }

    if (const json* s = root.get("skywave")) {
        ObjectReader r(*s, "skywave");
        r.number("ionosphere_height_m", c.skywave.ionosphere_height_m);
        if (r.has("ground_distance_m") &&
            (r.has("transmitter_position") || r.has("receiver_position")))
            throw ValidationError("skywave.ground_distance_m",
                                  "give either ground_distance_m or transmitter/receiver positions, not both");
        r.number("ground_distance_m", c.skywave.ground_distance_m);
        if (const json* p = r.get("transmitter_position"))
            c.transmitter_position = read_point(*p, "skywave.transmitter_position");
        if (const json* p = r.get("receiver_position"))
            c.receiver_position = read_point(*p, "skywave.receiver_position");
        if (c.transmitter_position.has_value() != c.receiver_position.has_value())
            throw ValidationError("skywave.receiver_position",
                                  "transmitter_position and receiver_position must be given together");

        if (r.has("attenuation_alpha") && r.has("alpha_table"))
            throw ValidationError("skywave.alpha_table", "give either attenuation_alpha or alpha_table, not both");
        r.number("attenuation_alpha", c.skywave.attenuation_alpha);
        if (const json* a = r.get("alpha_table")) {
            ObjectReader ar(*a, "skywave.alpha_table");
            AlphaTableRef ref;
            if (!ar.has("path")) throw ValidationError(ar.field("path"), "required");
            ar.string("path", ref.path);
            std::string period = "night";
            ar.string("period", period);
            try {
                ref.period = parse_day_period(period);
            } catch (const DomainError& e) {
                throw ValidationError(ar.field("period"), e.what());
            }
            ar.finish();
            const std::filesystem::path p(ref.path);
            if (p.is_relative()) ref.path = (std::filesystem::path(base_dir) / p).lexically_normal().string();
            c.alpha_table = ref;
        }
        r.finish();
    }

    if (const json* n = root.get("noise")) {
        ObjectReader r(*n, "noise");
        if (const json* v = r.get("snr_db")) {
            if (v->is_null()) c.noise.snr_db = std::numeric_limits<double>::infinity();
            else if (v->is_string() && (v->get<std::string>() == "inf" || v->get<std::string>() == "off"))
                c.noise.snr_db = std::numeric_limits<double>::infinity();
            else if (v->is_number()) c.noise.snr_db = v->get<double>();
            else throw ValidationError("noise.snr_db", "expected a number, null, \"inf\" or \"off\"");
        }
        r.seed("seed", c.noise.seed);
        r.finish();
    }

    root.seed("bits_seed", c.bits_seed);
    root.number("sample_rate_hz", c.sample_rate_hz);
    root.number("duration_s", c.duration_s);

    if (const json* w = root.get("plot_window")) {
        ObjectReader r(*w, "plot_window");
        r.number("start_s", c.plot_window.start_s);
        r.number("end_s", c.plot_window.end_s);
        r.finish();
    }

    if (const json* o = root.get("outputs")) {
        ObjectReader r(*o, "outputs");
        r.string("dir", c.outputs.dir);
        std::string fmt = to_string(c.outputs.format);
        r.string("format", fmt);
        try {
            c.outputs.format = parse_sample_format(fmt);
        } catch (const DomainError& e) {
            throw ValidationError("outputs.format", e.what());
        }
        r.finish();
        const std::filesystem::path p(c.outputs.dir);
        if (!c.outputs.dir.empty() && p.is_relative())
            c.outputs.dir = (std::filesystem::path(base_dir) / p).lexically_normal().string();
    }

    root.finish();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open scenario file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("<file>", std::string("malformed JSON: ") + e.what());
    }
    const auto base = std::filesystem::path(path).parent_path();
    return scenario_from_json(j, base.empty() ? "." : base.string());
}

json scenario_to_json(const ScenarioConfig& c) {
    const auto& tx = c.transmitter;
    json sky = {{"ionosphere_height_m", c.skywave.ionosphere_height_m}};
    if (c.transmitter_position && c.receiver_position) {
        sky["transmitter_position"] = point_json(*c.transmitter_position);
        sky["receiver_position"] = point_json(*c.receiver_position);
    } else {
        sky["ground_distance_m"] = c.skywave.ground_distance_m;
    }
    if (c.alpha_table)
        sky["alpha_table"] = {{"path", c.alpha_table->path}, {"period", to_string(c.alpha_table->period)}};
    else
        sky["attenuation_alpha"] = c.skywave.attenuation_alpha;

    return {
        {"name", c.name},
        {"transmitter",
         {{"carrier_freq_hz", tx.carrier_freq_hz},
          {"data_rate_bps", tx.data_rate_bps},
          {"amp_msk", tx.amp_msk},
          {"amp_cw1", tx.amp_cw1},
          {"amp_cw2", tx.amp_cw2},
          {"phase_cw1_rad", tx.phase_cw1_rad},
          {"phase_cw2_rad", tx.phase_cw2_rad},
          {"initial_inphase_bit", tx.initial_inphase_bit},
          {"nominal_tx_power_w", tx.nominal_tx_power_w},
          {"allow_nonstandard", tx.allow_nonstandard}}},
        {"skywave", sky},
        {"noise", {{"snr_db", c.noise.enabled() ? json(c.noise.snr_db) : json(nullptr)},
                   {"seed", c.noise.seed}}},
        {"bits_seed", c.bits_seed},
        {"sample_rate_hz", c.sample_rate_hz},
        {"duration_s", c.duration_s},
        {"plot_window", {{"start_s", c.plot_window.start_s}, {"end_s", c.plot_window.end_s}}},
        {"outputs", {{"dir", c.outputs.dir}, {"format", to_string(c.outputs.format)}}},
    };
}

SkywaveParams resolved_skywave(const ScenarioConfig& c) {
    SkywaveParams p = c.skywave;
    if (c.transmitter_position && c.receiver_position)
        p.ground_distance_m = great_circle_distance(c.transmitter_position->lat_deg, c.transmitter_position->lon_deg,
                                                    c.receiver_position->lat_deg, c.receiver_position->lon_deg);
    if (c.alpha_table) {
        const AlphaTable table = AlphaTable::load(c.alpha_table->path);
        const auto alpha = table.lookup(p.ground_distance_m, c.alpha_table->period);
        if (!alpha)
            throw ValidationError("skywave.alpha_table",
                                  "no row covers " + num(p.ground_distance_m / 1000.0) + " km (" +
                                      to_string(c.alpha_table->period) + ")");
        p.attenuation_alpha = *alpha;
    }
    return p;
}

std::vector<Violation> validate_scenario(const ScenarioConfig& c) {
    std::vector<Violation> out = transmitter_violations(c.transmitter, c.sample_rate_hz, "transmitter.");
    auto add = [&](std::string field, std::string value, std::string constraint) {
        out.push_back({std::move(field), std::move(value), std::move(constraint)});
    };

    if (!std::isfinite(c.duration_s) || !(c.duration_s > 0.0))
        add("duration_s", num(c.duration_s), "must be finite and > 0");

    const auto& w = c.plot_window;
    if (std::isfinite(c.duration_s) && c.duration_s > 0.0 &&
        !(w.start_s >= 0.0 && w.start_s < w.end_s && w.end_s <= c.duration_s))
        add("plot_window", "[" + num(w.start_s) + ", " + num(w.end_s) + "]",
            "must satisfy 0 <= start_s < end_s <= duration_s");

    if (std::isnan(c.noise.snr_db) || c.noise.snr_db == -std::numeric_limits<double>::infinity())
        add("noise.snr_db", num(c.noise.snr_db), "must be finite, or null to disable noise");

    if (c.outputs.dir.empty()) add("outputs.dir", "\"\"", "must not be empty");

    bool geometry_ok = true;
    for (const auto& [name, pos] : {std::pair{"skywave.transmitter_position", c.transmitter_position},
                                    std::pair{"skywave.receiver_position", c.receiver_position}}) {
        if (!pos) continue;
        if (!(pos->lat_deg >= -90.0 && pos->lat_deg <= 90.0)) {
            add(std::string(name) + ".lat_deg", num(pos->lat_deg), "must lie in [-90, 90]");
            geometry_ok = false;
        }
        if (!(pos->lon_deg >= -180.0 && pos->lon_deg <= 180.0)) {
            add(std::string(name) + ".lon_deg", num(pos->lon_deg), "must lie in [-180, 180]");
            geometry_ok = false;
        }
    }

    std::optional<SkywaveParams> sky;
    if (geometry_ok) {
        try {
            sky = resolved_skywave(c);
        } catch (const ValidationError& e) {
            add(e.field(), "", e.what());
        } catch (const Error& e) {
            add("skywave.alpha_table.path", c.alpha_table ? c.alpha_table->path : "", e.what());
        }
    }
    if (sky) {
        for (auto& v : skywave_violations(*sky, "skywave.")) out.push_back(std::move(v));
    }

    // The run needs a valid delayed region long enough for the Hilbert and tone checks.
    if (out.empty() && sky) {
        const std::size_t n = sample_count(c.sample_rate_hz, c.duration_s);
        const double shift = std::floor(skywave_delay(*sky) * c.sample_rate_hz);
        const double needed = shift + 2.0 * FractionalDelayKernel::edge_exclusion +
                              static_cast<double>(hilbert_min_samples + 2 * hilbert_edge_samples);
        if (static_cast<double>(n) < needed)
            add("duration_s", num(c.duration_s),
                "too short: need at least " + num(needed) + " samples after the skywave delay and edge exclusions");
    }
    return out;
}

}  // namespace rmode
