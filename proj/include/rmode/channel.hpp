// channel.hpp - single-hop skywave propagation and AWGN
//
// r(t) = s(t) + alpha s(t - t_d), with t_d from the flat single-hop geometry
// (reflection at ionosphere height h, ground range d).
#pragma once

#include "rmode/core.hpp"
#include "rmode/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rmode {

inline constexpr double speed_of_light_m_s = 299'792'458.0;
inline constexpr double earth_radius_m = 6'371'000.0;

struct SkywaveParams {
    double ionosphere_height_m = 90'000.0;
    double ground_distance_m = 210'000.0;
    double attenuation_alpha = 0.3;
};

std::vector<Violation> skywave_violations(const SkywaveParams& p, const std::string& prefix = "");

struct NoiseParams {
    // +infinity disables the noise stage.
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    bool enabled() const noexcept { return snr_db != std::numeric_limits<double>::infinity(); }
};

// (sqrt(4 h^2 + d^2) - d) / c, evaluated as 4 h^2 / ((sqrt(4 h^2 + d^2) + d) c)
// to avoid cancellation at long range. Throws DomainError on invalid params.
double skywave_delay(const SkywaveParams& p);

// Haversine distance on a sphere of radius earth_radius_m; degrees in.
double great_circle_distance(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

// Windowed-sinc fractional delay: 129 taps, Kaiser beta 8.6.
struct FractionalDelayKernel {
    static constexpr int taps = 129;
    static constexpr int half_taps = 64;
    static constexpr double kaiser_beta = 8.6;
    static constexpr std::size_t edge_exclusion = 64;
};

struct DelayedSignal {
    SignalBuffer signal;
    std::size_t integer_shift = 0;  // whole samples
    double fraction = 0.0;          // remaining sub-sample delay in [0, 1)
    // Samples outside this range depend on zero pre-history or on the kernel
    // running off the buffer end.
    SampleRange valid;
};

// Kernel taps for a sub-sample delay mu in [0, 1): h[m + 64] weights x[n - m],
// m = -64..64, normalized to unit DC gain.
std::vector<double> fractional_delay_taps(double mu);

// x delayed by tau seconds; output keeps x's start time and length.
DelayedSignal fractional_delay(const SignalBuffer& x, double tau_s);

struct SkywaveResult {
    SignalBuffer received;
    SignalBuffer skywave;
    double delay_s = 0.0;
    std::size_t integer_shift = 0;
    double fraction = 0.0;
    SampleRange valid;
};

// received = ground + alpha * delay(ground, tau)
SkywaveResult superpose_delayed(const SignalBuffer& ground, double tau_s, double alpha);

SkywaveResult apply_skywave(const SignalBuffer& ground, const SkywaveParams& p);

// Amplitude scaling and phase shift of a single tone under groundwave + skywave.
struct Distortion {
    double eta = 1.0;
    double beta_rad = 0.0;  // received relative to ground, positive = advance
};

// eta e^{j beta} = 1 + alpha e^{-j omega t_d}; beta in (-pi, pi].
Distortion eta_beta_closed_form(double alpha, double omega_rad_s, double t_d_s);

// The printed variant: eta = sqrt(1 + a^2 - 2 a cos(w t_d)),
// beta = atan(a sin(w t_d) / (1 - a cos(w t_d))). Kept for comparison only.
Distortion eta_beta_as_printed(double alpha, double omega_rad_s, double t_d_s);

// Unit-variance Gaussian samples from the pinned stream: pair i uses stream
// outputs 2i and 2i+1 and fills samples 2i (cos branch) and 2i+1 (sin branch).
std::vector<double> standard_normal(std::size_t n, std::uint64_t seed);

// x + N(0, sigma^2), sigma^2 = P_ref / 10^(snr_db / 10). P_ref defaults to the
// mean square of x. snr_db = +inf returns x unchanged.
SignalBuffer add_awgn(const SignalBuffer& x, const NoiseParams& n,
                      std::optional<double> reference_power = std::nullopt);

enum class DayPeriod { day, night };

std::string to_string(DayPeriod p);
DayPeriod parse_day_period(const std::string& s);

// Attenuation lookup keyed by (distance bucket, day|night). Text rows:
//   distance_km_min, distance_km_max, day|night, alpha
// with '#' comments. A distance matches min <= d < max.
class AlphaTable {
public:
    struct Row {
        double distance_km_min;
        double distance_km_max;
        DayPeriod period;
        double alpha;
    };

    static AlphaTable parse(std::istream& in, const std::string& source = "<stream>");
    static AlphaTable load(const std::string& path);

    std::optional<double> lookup(double distance_m, DayPeriod period) const;
    const std::vector<Row>& rows() const noexcept { return rows_; }

private:
    std::vector<Row> rows_;
};

}  // namespace rmode
