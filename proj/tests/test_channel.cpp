// test_channel.cpp - skywave geometry, fractional delay, superposition, AWGN
#include <doctest.h>

#include "oracles.hpp"
#include "rmode/analysis.hpp"
#include "rmode/channel.hpp"
#include "rmode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace rmode;

namespace {

constexpr double fs = 2'048'000.0;
constexpr double pi = std::numbers::pi;

SignalBuffer tone(double f, double amp, double phase, double duration) {
    const auto n = static_cast<std::size_t>(std::llround(duration * fs));
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double cyc = std::fmod(static_cast<long double>(f) * i / fs, 1.0L);
        v[i] = amp * std::sin(2.0 * pi * static_cast<double>(cyc) + phase);
    }
    return SignalBuffer(std::move(v), fs);
}

SignalBuffer noise_like(std::size_t n, std::uint64_t seed) {
    return SignalBuffer(standard_normal(n, seed), fs);
}

double wrap(double a) { return std::remainder(a, 2.0 * pi); }

}  // namespace

TEST_CASE("skywave delay matches the extended-precision value") {
    const double td = skywave_delay({90'000.0, 210'000.0, 0.3});
    CHECK(std::abs(static_cast<long double>(td) - oracle::td_90km_210km) < 1e-18L);
    const double t0 = skywave_delay({90'000.0, 0.0, 0.3});
    CHECK(std::abs(static_cast<long double>(t0) - oracle::td_90km_0km) < 1e-18L);
    CHECK(t0 * 1e6 == doctest::Approx(600.42).epsilon(1e-5));
}

TEST_CASE("skywave delay grows with height and shrinks with range") {
    double prev = 0.0;
    for (double h = 60e3; h <= 400e3; h += 10e3) {
        const double t = skywave_delay({h, 210e3, 0.3});
        CHECK(t > prev);
        prev = t;
    }
    prev = 1.0;
    for (double d = 0.0; d <= 2000e3; d += 50e3) {
        const double t = skywave_delay({90e3, d, 0.3});
        CHECK(t < prev);
        CHECK(t > 0.0);
        prev = t;
    }
}

TEST_CASE("skywave parameters are validated") {
    CHECK_THROWS_AS(skywave_delay({0.0, 210e3, 0.3}), DomainError);
    CHECK_THROWS_AS(skywave_delay({90e3, -1.0, 0.3}), DomainError);
    CHECK_THROWS_AS(skywave_delay({90e3, 210e3, 1.5}), DomainError);
    CHECK(skywave_violations({90e3, 210e3, 0.3}).empty());
    CHECK(skywave_violations({-1.0, -1.0, 0.3}).size() == 2);
}

TEST_CASE("great circle distance") {
    CHECK(great_circle_distance(34.0, 127.0, 34.0, 127.0) == 0.0);
    CHECK(great_circle_distance(0.0, 0.0, 0.0, 180.0) ==
          doctest::Approx(oracle::great_circle_half_turn_m).epsilon(1e-12));
    CHECK(great_circle_distance(0.0, 0.0, 1.0, 0.0) ==
          doctest::Approx(oracle::great_circle_one_degree_m).epsilon(1e-12));
    CHECK(great_circle_distance(34.028, 127.308, 35.1, 129.04) ==
          doctest::Approx(oracle::geomundo_to_busan_m).epsilon(1e-10));
    CHECK(great_circle_distance(10.0, 20.0, -30.0, 40.0) ==
          doctest::Approx(great_circle_distance(-30.0, 40.0, 10.0, 20.0)).epsilon(1e-15));
    CHECK_THROWS_AS(great_circle_distance(91.0, 0.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(great_circle_distance(0.0, 181.0, 0.0, 0.0), DomainError);
}

TEST_CASE("fractional delay taps") {
    for (double mu : {0.0, 0.25, 0.5, 0.877}) {
        const auto h = fractional_delay_taps(mu);
        REQUIRE(h.size() == 129);
        double s = 0.0;
        for (double v : h) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("zero delay is the identity") {
    const SignalBuffer x = noise_like(10000, 3);
    const DelayedSignal d = fractional_delay(x, 0.0);
    CHECK(d.integer_shift == 0);
    CHECK(d.fraction == 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(d.signal[i] - x[i]) <= 1e-12);
}

TEST_CASE("integer delay is an exact shift in the valid region") {
    const SignalBuffer x = noise_like(10000, 4);
    const DelayedSignal d = fractional_delay(x, 37.0 / fs);
    CHECK(d.integer_shift == 37);
    CHECK(d.fraction == 0.0);
    REQUIRE(d.valid.size() > 0);
    for (std::size_t i = d.valid.begin; i < d.valid.end; ++i) REQUIRE(d.signal[i] == x[i - 37]);
}

TEST_CASE("delayed tone carries the expected phase shift") {
    const SignalBuffer x = tone(287'000.0, 1.0, 0.0, 0.05);
    const double tau = 222.10e-6;
    const DelayedSignal d = fractional_delay(x, tau);
    const ToneEstimate a = estimate_tone(x, 287'000.0, d.valid);
    const ToneEstimate b = estimate_tone(d.signal, 287'000.0, d.valid);
    CHECK(std::abs(wrap(b.phase_rad - a.phase_rad + 2.0 * pi * 287'000.0 * tau)) < 1e-3);
    CHECK(b.amplitude == doctest::Approx(a.amplitude).epsilon(1e-6));
}

TEST_CASE("delays compose") {
    const SignalBuffer x = tone(287'000.0, 1.0, 0.3, 0.02);
    const double t1 = 13.37 / fs, t2 = 101.61 / fs;
    const DelayedSignal a = fractional_delay(fractional_delay(x, t1).signal, t2);
    const DelayedSignal b = fractional_delay(x, t1 + t2);
    const SampleRange r{a.valid.begin + 128, a.valid.end};
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        worst = std::max(worst, std::abs(a.signal[i] - b.signal[i]));
        peak = std::max(peak, std::abs(b.signal[i]));
    }
    CHECK(worst / peak < 1e-6);
}

TEST_CASE("fractional delay rejects bad input") {
    CHECK_THROWS_AS(fractional_delay(noise_like(100, 1), 1e-5), SizeError);
    CHECK_THROWS_AS(fractional_delay(noise_like(1000, 1), -1e-6), DomainError);
}

TEST_CASE("alpha zero leaves the groundwave bit-exact") {
    const SignalBuffer x = noise_like(20000, 5);
    const SkywaveResult r = apply_skywave(x, {90e3, 210e3, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(r.received[i] == x[i]);
}

TEST_CASE("apply_skywave is linear") {
    const SignalBuffer x = noise_like(20000, 6), y = noise_like(20000, 7);
    const SkywaveParams p{90e3, 210e3, 0.3};
    const SignalBuffer lhs = apply_skywave(add_signals(scale_signal(x, 2.0), y), p).received;
    const SignalBuffer rx = apply_skywave(x, p).received, ry = apply_skywave(y, p).received;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(lhs[i] - (2.0 * rx[i] + ry[i])));
    CHECK(worst < 1e-12);
}

TEST_CASE("tone through the channel at omega t_d = pi / 2") {
    const double f = 287'000.0;
    const double td = (pi / 2.0) / (2.0 * pi * f);
    const SignalBuffer g = tone(f, 1.0, 0.0, 0.1);
    const SkywaveResult r = superpose_delayed(g, td, 0.3);
    const ToneEstimate a = estimate_tone(g, f, r.valid);
    const ToneEstimate b = estimate_tone(r.received, f, r.valid);
    CHECK(b.amplitude / a.amplitude == doctest::Approx(oracle::eta_a03_quarter).epsilon(1e-3));
    CHECK(std::abs(wrap(b.phase_rad - a.phase_rad) - oracle::beta_a03_quarter) < 1e-3);

    const Distortion cf = eta_beta_closed_form(0.3, 2.0 * pi * f, td);
    CHECK(cf.eta == doctest::Approx(oracle::eta_a03_quarter).epsilon(1e-13));
    CHECK(cf.beta_rad == doctest::Approx(oracle::beta_a03_quarter).epsilon(1e-13));
}

TEST_CASE("closed-form examples") {
    const Distortion a = eta_beta_closed_form(0.0, 1.0, 1.0);
    CHECK(a.eta == 1.0);
    CHECK(a.beta_rad == 0.0);
    const Distortion b = eta_beta_closed_form(0.5, pi, 1.0);
    CHECK(b.eta == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(b.beta_rad) < 1e-15);
    // The printed variant has eta = |1 - a e^{j w t_d}|, which differs unless w t_d = 0 or pi.
    const Distortion p = eta_beta_as_printed(0.5, pi, 1.0);
    CHECK(p.eta == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("awgn: off, determinism, calibration") {
    const SignalBuffer x = tone(287'000.0, 1.0, 0.0, 0.5);
    const SignalBuffer same = add_awgn(x, NoiseParams{});
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(same[i] == x[i]);

    const NoiseParams n{20.0, 99};
    const SignalBuffer a = add_awgn(x, n), b = add_awgn(x, n);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(a[i] == b[i]);
    CHECK(estimate_snr(x, a) == doctest::Approx(20.0).epsilon(0.5 / 20.0));
    CHECK(std::abs(estimate_snr(x, a) - 20.0) <= 0.5);
    const SignalBuffer c = add_awgn(x, NoiseParams{20.0, 100});
    CHECK(c[10] != a[10]);
}

TEST_CASE("awgn: degenerate input") {
    CHECK_THROWS_AS(add_awgn(SignalBuffer::zeros(1000, fs), NoiseParams{10.0, 1}), DegenerateSignalError);
    CHECK_THROWS_AS(add_awgn(noise_like(100, 1), NoiseParams{std::nan(""), 1}), DomainError);
    CHECK_THROWS_AS(add_awgn(noise_like(100, 1), NoiseParams{-std::numeric_limits<double>::infinity(), 1}),
                    DomainError);
}

TEST_CASE("standard normal stream is reproducible and white") {
    const auto v = standard_normal(1'000'000, 12);
    CHECK(v == standard_normal(1'000'000, 12));
    double p = 0.0;
    for (double s : v) p += s * s;
    p /= static_cast<double>(v.size());
    CHECK(p == doctest::Approx(1.0).epsilon(0.01));
    for (std::size_t lag = 1; lag <= 10; ++lag) {
        double acc = 0.0;
        for (std::size_t i = lag; i < v.size(); ++i) acc += v[i] * v[i - lag];
        CHECK(std::abs(acc / static_cast<double>(v.size()) / p) < 0.01);
    }
}

TEST_CASE("alpha table") {
    std::istringstream in(
        "# distance_km_min, distance_km_max, period, alpha\n"
        "0, 150, day, 0.05\n"
        "150, 400, day, 0.1\n"
        "0, 400, night, 0.4\n");
    const AlphaTable t = AlphaTable::parse(in);
    CHECK(t.rows().size() == 3);
    CHECK(t.lookup(210e3, DayPeriod::day) == 0.1);
    CHECK(t.lookup(150e3, DayPeriod::day) == 0.1);
    CHECK(t.lookup(210e3, DayPeriod::night) == 0.4);
    CHECK_FALSE(t.lookup(500e3, DayPeriod::night).has_value());
    std::istringstream bad("0, 100, dusk, 0.3\n");
    CHECK_THROWS(AlphaTable::parse(bad));
    std::istringstream range("0, 100, day, 1.3\n");
    CHECK_THROWS(AlphaTable::parse(range));
    CHECK_THROWS_AS(AlphaTable::load("/nonexistent/alpha.csv"), IoError);
}
