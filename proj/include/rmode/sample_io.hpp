// sample_io.hpp - sample files (raw float32 LE, IEEE-float WAV) and CSV traces
#pragma once

#include "rmode/core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rmode {

// Samples narrowed to IEEE-754 binary32, little-endian, no header.
void write_raw_f32(const std::filesystem::path& path, const SignalBuffer& x);
std::vector<float> read_raw_f32(const std::filesystem::path& path);

// Mono WAVE_FORMAT_IEEE_FLOAT, 32-bit, with a fact chunk.
void write_wav_f32(const std::filesystem::path& path, const SignalBuffer& x);

struct TraceRow {
    double time_s;
    double groundwave;
    double skywave;
    double received;
};

// Columns time_s,groundwave,skywave,received at full double precision.
void write_trace_csv(const std::filesystem::path& path, const SignalBuffer& groundwave,
                     const SignalBuffer& skywave, const SignalBuffer& received, SampleRange rows);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rmode
