// bench_kernels.cpp - parallel kernels against their serial references

#include "rmode/analysis.hpp"
#include "rmode/channel.hpp"
#include "rmode/reference.hpp"
#include "rmode/tx.hpp"

#include <benchmark/benchmark.h>

namespace {

constexpr double fs = rmode::default_sample_rate_hz;
constexpr double seconds = 0.25;

const rmode::TransmitterConfig& tx() {
    static const rmode::TransmitterConfig cfg{};
    return cfg;
}

const rmode::BitStream& bits() {
    static const rmode::BitStream b = rmode::generate_bits(1, 100);
    return b;
}

const rmode::SignalBuffer& composite() {
    static const rmode::SignalBuffer s = rmode::compose_transmit(
        rmode::msk_modulate(bits(), tx(), fs, seconds), rmode::generate_cw(tx(), rmode::CwTone::lower, fs, seconds),
        rmode::generate_cw(tx(), rmode::CwTone::upper, fs, seconds));
    return s;
}

void BM_MskParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::msk_modulate(bits(), tx(), fs, seconds));
}
void BM_MskReference(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::reference::msk_modulate(bits(), tx(), fs, seconds));
}
void BM_CwParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::generate_cw(tx(), rmode::CwTone::lower, fs, seconds));
}
void BM_CwReference(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::reference::generate_cw(tx(), rmode::CwTone::lower, fs, seconds));
}
void BM_DelayParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::fractional_delay(composite(), 222.108e-6));
}
void BM_DelayReference(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::reference::fractional_delay(composite(), 222.108e-6));
}
void BM_NoiseParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::standard_normal(composite().size(), 7));
}
void BM_NoiseReference(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(rmode::reference::standard_normal(composite().size(), 7));
}
void BM_ToneParallel(benchmark::State& st) {
    const rmode::SampleRange w{0, composite().size()};
    for (auto _ : st) benchmark::DoNotOptimize(rmode::estimate_tone(composite(), 286'750.0, w));
}
void BM_ToneReference(benchmark::State& st) {
    const rmode::SampleRange w{0, composite().size()};
    for (auto _ : st) benchmark::DoNotOptimize(rmode::reference::estimate_tone(composite(), 286'750.0, w));
}

}  // namespace

BENCHMARK(BM_MskParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MskReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CwParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CwReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DelayParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DelayReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoiseParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoiseReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ToneParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ToneReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
