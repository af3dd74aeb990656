// rmode_sim - scenario runner for the MF DGNSS R-Mode signal simulator
//
//   rmode_sim run <scenario.json> [--seed-override N] [--out-dir DIR] [--format raw|wav|both]
//   rmode_sim validate <scenario.json>
//   rmode_sim report <run-dir>
//
// Exit codes: 0 success, 2 validation failure, 3 I/O failure,
// 4 verification-report tolerance breach.

#include "rmode/run.hpp"
#include "rmode/sample_io.hpp"
#include "rmode/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_io = 3;
constexpr int exit_breach = 4;

void print_report(const nlohmann::json& r) {
    const auto& sky = r.at("skywave");
    std::printf("scenario            %s\n", r.at("scenario").get<std::string>().c_str());
    std::printf("skywave delay       %.6f us (%.3f samples)\n", sky.at("delay_s").get<double>() * 1e6,
                sky.at("delay_samples").get<double>());
    std::printf("geometry            h = %.1f km, d = %.3f km, alpha = %.4f\n",
                sky.at("ionosphere_height_m").get<double>() / 1e3, sky.at("ground_distance_m").get<double>() / 1e3,
                sky.at("attenuation_alpha").get<double>());
    for (const auto& t : r.at("cw_tones")) {
        std::printf("%-4s %.1f Hz     closed form eta %.6f beta %+.6f rad", t.at("tone").get<std::string>().c_str(),
                    t.at("freq_hz").get<double>(), t.at("closed_form").at("eta").get<double>(),
                    t.at("closed_form").at("beta_rad").get<double>());
        if (!t.at("measured").is_null())
            std::printf(" | measured eta %.6f beta %+.6f rad", t.at("measured").at("eta").get<double>(),
                        t.at("measured").at("beta_rad").get<double>());
        std::printf(" [%s]\n", t.at("within_tolerance").get<bool>() ? "ok" : "BREACH");
    }
    const auto& env = r.at("envelope");
    if (!env.at("msk_max_rel_deviation").is_null())
        std::printf("MSK envelope        max relative deviation %.3e\n", env.at("msk_max_rel_deviation").get<double>());
    std::printf("composite envelope  [%.4f, %.4f]\n", env.at("composite_min").get<double>(),
                env.at("composite_max").get<double>());
    const auto& snr = r.at("snr");
    if (!snr.at("configured_db").is_null())
        std::printf("SNR                 configured %.2f dB, measured %.3f dB\n", snr.at("configured_db").get<double>(),
                    snr.at("measured_db").get<double>());
    else
        std::printf("SNR                 noise disabled\n");
    for (const auto& b : r.at("breaches")) std::printf("BREACH: %s\n", b.get<std::string>().c_str());
    std::printf("verification        %s\n", r.at("passed").get<bool>() ? "PASSED" : "FAILED");
}

int cmd_validate(const std::string& path) {
    const rmode::ScenarioConfig cfg = rmode::load_scenario(path);
    const auto violations = rmode::validate_scenario(cfg);
    for (const auto& v : violations) std::cout << "violation: " << rmode::to_string(v) << "\n";
    if (!violations.empty()) return exit_validation;
    std::cout << path << ": valid\n";
    return exit_ok;
}

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out_dir, const std::optional<std::string>& format) {
    rmode::ScenarioConfig cfg = rmode::load_scenario(path);
    if (seed) {
        cfg.bits_seed = *seed;
        cfg.noise.seed = *seed + 1;
    }
    if (out_dir) cfg.outputs.dir = *out_dir;
    if (format) cfg.outputs.format = rmode::parse_sample_format(*format);

    const auto violations = rmode::validate_scenario(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << rmode::to_string(v) << "\n";
        return exit_validation;
    }
    const rmode::RunReport report = rmode::run_scenario(cfg);
    std::printf("outputs             %s\n", cfg.outputs.dir.c_str());
    print_report(report.to_json());
    return report.passed() ? exit_ok : exit_breach;
}

int cmd_report(const std::string& dir) {
    namespace fs = std::filesystem;
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(rmode::read_text_file(fs::path(dir) / "report.json"));
    } catch (const nlohmann::json::exception& e) {
        throw rmode::IoError((fs::path(dir) / "report.json").string(), e.what());
    }
    print_report(report);

    // The exported traces must still satisfy received = groundwave + skywave.
    const auto rows = rmode::read_trace_csv(fs::path(dir) / "traces.csv");
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.received - (r.groundwave + r.skywave)));
    std::printf("traces.csv          %zu rows, max |received - (ground + sky)| = %.3e\n", rows.size(), worst);
    const bool traces_ok = worst <= 1e-12;
    if (!traces_ok) std::printf("BREACH: traces.csv received column is not groundwave + skywave\n");
    return report.at("passed").get<bool>() && traces_ok ? exit_ok : exit_breach;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MF DGNSS R-Mode signal simulator (MSK + CW tones, single-hop skywave, AWGN)"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    auto* run = app.add_subcommand("run", "Run a scenario and write samples, traces, metadata and report");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--seed-override", seed_override, "Replace bits_seed with N and the noise seed with N + 1");
    run->add_option("--out-dir", out_dir, "Output directory (overrides outputs.dir)");
    run->add_option("--format", format, "Sample file format")->check(CLI::IsMember({"raw", "wav", "both"}));

    auto* validate = app.add_subcommand("validate", "Check a scenario file against every invariant");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    std::string run_dir;
    auto* report = app.add_subcommand("report", "Summarize and re-check a finished run directory");
    report->add_option("run_dir", run_dir, "Directory written by `run`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*run) return cmd_run(scenario_path, seed_override, out_dir, format);
        if (*validate) return cmd_validate(scenario_path);
        if (*report) return cmd_report(run_dir);
    } catch (const rmode::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const rmode::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const rmode::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_ok;
}
