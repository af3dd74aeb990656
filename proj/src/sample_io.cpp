#include "rmode/sample_io.hpp"

#include "rmode/errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rmode {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

std::string f32le_bytes(const SignalBuffer& x) {
    std::string out;
    out.reserve(x.size() * 4);
    for (double v : x.samples()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

void write_bytes(const std::filesystem::path& path, const std::string& header, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

void write_raw_f32(const std::filesystem::path& path, const SignalBuffer& x) {
    write_bytes(path, {}, f32le_bytes(x));
}

std::vector<float> read_raw_f32(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 4 != 0) throw IoError(path.string(), "size is not a multiple of 4 bytes");
    std::vector<float> out(bytes.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b)
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
        out[i] = std::bit_cast<float>(u);
    }
    return out;
}

void write_wav_f32(const std::filesystem::path& path, const SignalBuffer& x) {
    const std::string data = f32le_bytes(x);
    if (data.size() > 0xffffff00u) throw IoError(path.string(), "too many samples for a WAV file");
    const auto rate = static_cast<std::uint32_t>(x.sample_rate() + 0.5);
    const auto data_bytes = static_cast<std::uint32_t>(data.size());

    std::string h;
    h += "RIFF";
    put_u32(h, 4 + (8 + 18) + (8 + 4) + (8 + data_bytes));
    h += "WAVE";
    h += "fmt ";
    put_u32(h, 18);
    put_u16(h, 3);  // WAVE_FORMAT_IEEE_FLOAT
    put_u16(h, 1);
    put_u32(h, rate);
    put_u32(h, rate * 4);
    put_u16(h, 4);
    put_u16(h, 32);
    put_u16(h, 0);
    h += "fact";
    put_u32(h, 4);
    put_u32(h, static_cast<std::uint32_t>(x.size()));
    h += "data";
    put_u32(h, data_bytes);
    write_bytes(path, h, data);
}

void write_trace_csv(const std::filesystem::path& path, const SignalBuffer& groundwave,
                     const SignalBuffer& skywave, const SignalBuffer& received, SampleRange rows) {
    require_aligned(groundwave, skywave);
    require_aligned(groundwave, received);
    if (rows.end > groundwave.size()) throw SizeError("write_trace_csv: row range exceeds buffer");

    std::string text = "time_s,groundwave,skywave,received\n";
    char line[160];
    for (std::size_t i = rows.begin; i < rows.end; ++i) {
        const int len = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n",
                                      groundwave.time_at(i), groundwave[i], skywave[i], received[i]);
        text.append(line, static_cast<std::size_t>(len));
    }
    write_text_file(path, text);
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "time_s,groundwave,skywave,received")
        throw IoError(path.string(), "missing or unexpected CSV header");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceRow r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.time_s, &r.groundwave, &r.skywave, &r.received) != 4)
            throw IoError(path.string(), "malformed CSV row: " + line);
        rows.push_back(r);
    }
    return rows;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    write_bytes(path, {}, text);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace rmode
