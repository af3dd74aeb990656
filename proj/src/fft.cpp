#include "fft.hpp"

#include "rmode/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <vector>

namespace rmode::detail {

namespace {
std::mutex planner_mutex;
}

struct RealFft::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n == 0) throw SizeError("RealFft: zero length");
    // Scratch arrays are only used for planning; FFTW_ESTIMATE does not touch them.
    std::vector<double> r(n);
    std::vector<std::complex<double>> c(n / 2 + 1);
    auto* cc = reinterpret_cast<fftw_complex*>(c.data());
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex);
    plans_->r2c = fftw_plan_dft_r2c_1d(len, r.data(), cc, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->c2r = fftw_plan_dft_c2r_1d(len, cc, r.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
    if (!plans_->r2c || !plans_->c2r) throw SizeError("RealFft: FFTW planning failed");
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex);
    if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
    if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

void RealFft::forward(const double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void RealFft::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in), out);
}

AnalyticFft::AnalyticFft(std::size_t n) : n_(n) {
    if (n == 0) throw SizeError("AnalyticFft: zero length");
    std::vector<long double> r(n);
    std::vector<std::complex<long double>> c(n);
    auto* cc = reinterpret_cast<fftwl_complex*>(c.data());
    std::lock_guard lock(planner_mutex);
    const int len = static_cast<int>(n);
    forward_ = fftwl_plan_dft_r2c_1d(len, r.data(), cc, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_ = fftwl_plan_dft_1d(len, cc, cc, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_ || !inverse_) throw SizeError("AnalyticFft: FFTW planning failed");
}

AnalyticFft::~AnalyticFft() {
    std::lock_guard lock(planner_mutex);
    if (forward_) fftwl_destroy_plan(static_cast<fftwl_plan>(forward_));
    if (inverse_) fftwl_destroy_plan(static_cast<fftwl_plan>(inverse_));
}

void AnalyticFft::forward(const long double* in, std::complex<long double>* out) const {
    fftwl_execute_dft_r2c(static_cast<fftwl_plan>(forward_), const_cast<long double*>(in),
                          reinterpret_cast<fftwl_complex*>(out));
}

void AnalyticFft::inverse(std::complex<long double>* data) const {
    auto* d = reinterpret_cast<fftwl_complex*>(data);
    fftwl_execute_dft(static_cast<fftwl_plan>(inverse_), d, d);
}

std::size_t fast_fft_size(std::size_t n) {
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t p7 = 1; p7 < best; p7 *= 7)
        for (std::size_t p5 = p7; p5 < best; p5 *= 5)
            for (std::size_t p3 = p5; p3 < best; p3 *= 3) {
                std::size_t v = p3;
                while (v < n) v *= 2;
                best = std::min(best, v);
            }
    return best;
}

}  // namespace rmode::detail
