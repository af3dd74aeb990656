#include "rmode/channel.hpp"

#include "rmode/errors.hpp"
#include "rmode/parallel.hpp"
#include "rmode/prng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace rmode {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double kaiser(double x, double half_length, double beta) {
    const double r = x / half_length;
    if (std::abs(r) > 1.0) return 0.0;
    return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - r * r)) / std::cyl_bessel_i(0.0, beta);
}

}  // namespace

std::vector<Violation> skywave_violations(const SkywaveParams& p, const std::string& prefix) {
    std::vector<Violation> out;
    if (!std::isfinite(p.ionosphere_height_m) || !(p.ionosphere_height_m > 0.0))
        out.push_back({prefix + "ionosphere_height_m", num(p.ionosphere_height_m), "must be finite and > 0"});
    if (!std::isfinite(p.ground_distance_m) || !(p.ground_distance_m >= 0.0))
        out.push_back({prefix + "ground_distance_m", num(p.ground_distance_m), "must be finite and >= 0"});
    if (!(p.attenuation_alpha >= 0.0 && p.attenuation_alpha <= 1.0))
        out.push_back({prefix + "attenuation_alpha", num(p.attenuation_alpha), "must lie in [0, 1]"});
    return out;
}

double skywave_delay(const SkywaveParams& p) {
    const auto v = skywave_violations(p);
    if (!v.empty()) throw DomainError("skywave_delay: " + to_string(v.front()));
    const double two_h = 2.0 * p.ionosphere_height_m;
    const double slant = std::hypot(two_h, p.ground_distance_m);
    return two_h * two_h / ((slant + p.ground_distance_m) * speed_of_light_m_s);
}

double great_circle_distance(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
    for (double lat : {lat1_deg, lat2_deg})
        if (!(lat >= -90.0 && lat <= 90.0))
            throw DomainError("great_circle_distance: latitude " + num(lat) + " outside [-90, 90]");
    for (double lon : {lon1_deg, lon2_deg})
        if (!(lon >= -180.0 && lon <= 180.0))
            throw DomainError("great_circle_distance: longitude " + num(lon) + " outside [-180, 180]");

    constexpr double deg = std::numbers::pi / 180.0;
    const double phi1 = lat1_deg * deg;
    const double phi2 = lat2_deg * deg;
    const double s_lat = std::sin((phi2 - phi1) / 2.0);
    const double s_lon = std::sin((lon2_deg - lon1_deg) * deg / 2.0);
    const double a = s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon;
    return 2.0 * earth_radius_m * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<double> fractional_delay_taps(double mu) {
    using K = FractionalDelayKernel;
    std::vector<double> h(K::taps);
    const double half_length = K::half_taps + 1.0;  // covers m - mu in (-65, 64]
    double sum = 0.0;
    for (int m = -K::half_taps; m <= K::half_taps; ++m) {
        const double x = m - mu;
        const double v = sinc(x) * kaiser(x, half_length, K::kaiser_beta);
        h[static_cast<std::size_t>(m + K::half_taps)] = v;
        sum += v;
    }
    for (double& v : h) v /= sum;
    return h;
}

namespace {

struct DelaySplit {
    std::size_t integer_shift;
    double fraction;
};

DelaySplit split_delay(double tau_s, double sample_rate) {
    if (!std::isfinite(tau_s) || tau_s < 0.0)
        throw DomainError("fractional_delay: tau must be finite and >= 0, got " + num(tau_s));
    const double d = tau_s * sample_rate;
    const double whole = std::round(d);
    // Delays within a nanosample of an integer take the exact shift path.
    if (std::abs(d - whole) < 1e-9) return {static_cast<std::size_t>(whole), 0.0};
    const double fl = std::floor(d);
    return {static_cast<std::size_t>(fl), d - fl};
}

}  // namespace

DelayedSignal fractional_delay(const SignalBuffer& x, double tau_s) {
    using K = FractionalDelayKernel;
    if (x.size() < static_cast<std::size_t>(K::taps))
        throw SizeError("fractional_delay: buffer of " + std::to_string(x.size()) +
                        " samples is shorter than the " + std::to_string(K::taps) + "-tap kernel");
    const auto [shift, mu] = split_delay(tau_s, x.sample_rate());
    const std::size_t n = x.size();
    const double* in = x.data();
    std::vector<double> out(n, 0.0);
    const auto count = static_cast<std::ptrdiff_t>(n);

    if (mu == 0.0) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto j = static_cast<std::size_t>(i);
            if (j >= shift) out[j] = in[j - shift];
        }
    } else {
        const std::vector<double> h = fractional_delay_taps(mu);
        const auto sn = static_cast<std::ptrdiff_t>(n);
        const auto ss = static_cast<std::ptrdiff_t>(shift);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            // y[i] = sum_m h[m] x[i - shift - m]
            const std::ptrdiff_t centre = i - ss;
            const std::ptrdiff_t m_lo = std::max<std::ptrdiff_t>(-K::half_taps, centre - (sn - 1));
            const std::ptrdiff_t m_hi = std::min<std::ptrdiff_t>(K::half_taps, centre);
            double acc = 0.0;
            for (std::ptrdiff_t m = m_lo; m <= m_hi; ++m)
                acc += h[static_cast<std::size_t>(m + K::half_taps)] * in[centre - m];
            out[static_cast<std::size_t>(i)] = acc;
        }
    }

    SampleRange valid{std::min(n, shift + K::edge_exclusion),
                      n > K::edge_exclusion ? n - K::edge_exclusion : 0};
    if (valid.end < valid.begin) valid.end = valid.begin;
    return {SignalBuffer(std::move(out), x.sample_rate(), x.start_time()), shift, mu, valid};
}

SkywaveResult superpose_delayed(const SignalBuffer& ground, double tau_s, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("attenuation alpha must lie in [0, 1], got " + num(alpha));
    DelayedSignal delayed = fractional_delay(ground, tau_s);
    SignalBuffer sky = scale_signal(delayed.signal, alpha);
    SignalBuffer received = add_signals(ground, sky);
    return {std::move(received), std::move(sky), tau_s, delayed.integer_shift, delayed.fraction,
            delayed.valid};
}

SkywaveResult apply_skywave(const SignalBuffer& ground, const SkywaveParams& p) {
    return superpose_delayed(ground, skywave_delay(p), p.attenuation_alpha);
}

Distortion eta_beta_closed_form(double alpha, double omega_rad_s, double t_d_s) {
    const std::complex<double> z = 1.0 + alpha * std::polar(1.0, -omega_rad_s * t_d_s);
    return {std::abs(z), std::arg(z)};
}

Distortion eta_beta_as_printed(double alpha, double omega_rad_s, double t_d_s) {
    const double wt = omega_rad_s * t_d_s;
    const double c = std::cos(wt);
    return {std::sqrt(1.0 + alpha * alpha - 2.0 * alpha * c),
            std::atan(alpha * std::sin(wt) / (1.0 - alpha * c))};
}

std::vector<double> standard_normal(std::size_t n, std::uint64_t seed) {
    std::vector<double> z(n);
    const auto pairs = static_cast<std::ptrdiff_t>((n + 1) / 2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < pairs; ++p) {
        const auto i = static_cast<std::uint64_t>(p);
        const auto [g0, g1] = box_muller(splitmix64_at(seed, 2 * i), splitmix64_at(seed, 2 * i + 1));
        z[2 * i] = g0;
        if (2 * i + 1 < n) z[2 * i + 1] = g1;
    }
    return z;
}

SignalBuffer add_awgn(const SignalBuffer& x, const NoiseParams& n,
                      std::optional<double> reference_power) {
    if (std::isnan(n.snr_db) || n.snr_db == -std::numeric_limits<double>::infinity())
        throw DomainError("add_awgn: snr_db must be finite or +inf");
    if (!n.enabled()) return x;
    if (x.empty()) throw DomainError("add_awgn: empty buffer");
    const double p_ref = reference_power ? *reference_power : mean_square(x);
    if (!(p_ref > 0.0) || !std::isfinite(p_ref))
        throw DegenerateSignalError("add_awgn: reference power is " + num(p_ref) +
                                    "; SNR is undefined for a zero-power signal");
    const double sigma = std::sqrt(p_ref / std::pow(10.0, n.snr_db / 10.0));
    std::vector<double> out = standard_normal(x.size(), n.seed);
    const double* in = x.data();
    const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = in[i] + sigma * out[i];
    return SignalBuffer(std::move(out), x.sample_rate(), x.start_time());
}

std::string to_string(DayPeriod p) { return p == DayPeriod::day ? "day" : "night"; }

DayPeriod parse_day_period(const std::string& s) {
    if (s == "day") return DayPeriod::day;
    if (s == "night") return DayPeriod::night;
    throw DomainError("expected 'day' or 'night', got '" + s + "'");
}

}  // namespace rmode
