// fft.hpp - thin RAII wrapper over FFTW real transforms
#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace rmode::detail {

// Unnormalized real-to-complex / complex-to-real transforms of length n.
// Plans are FFTW_ESTIMATE so the arithmetic is identical on every run;
// execution is reentrant, plan creation is serialized internally.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t bins() const noexcept { return n_ / 2 + 1; }

    // in: n reals; out: n/2 + 1 bins.
    void forward(const double* in, std::complex<double>* out) const;
    // in: n/2 + 1 bins (destroyed); out: n reals, scaled by n.
    void inverse(std::complex<double>* in, double* out) const;

private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

// Extended-precision pair used by the analytic signal: a real-to-complex
// forward transform and an in-place complex inverse, both of length n and
// unnormalized.
class AnalyticFft {
public:
    explicit AnalyticFft(std::size_t n);
    ~AnalyticFft();
    AnalyticFft(const AnalyticFft&) = delete;
    AnalyticFft& operator=(const AnalyticFft&) = delete;

    std::size_t size() const noexcept { return n_; }

    // in: n reals; out: first n/2 + 1 entries of an n-entry buffer.
    void forward(const long double* in, std::complex<long double>* out) const;
    void inverse(std::complex<long double>* data) const;

private:
    std::size_t n_;
    void* forward_ = nullptr;
    void* inverse_ = nullptr;
};

// Smallest 2^a 3^b 5^c 7^d >= n.
std::size_t fast_fft_size(std::size_t n);

}  // namespace rmode::detail
